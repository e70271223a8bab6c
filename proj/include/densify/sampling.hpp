#pragma once

// Density-equalizing non-uniform sampling.
//
// The distinct non-zero data densities are split into L adjacent intervals
// holding as close to N/L sample areas each as possible. Every area in the
// l-th interval is then thinned so its expected represented density is l.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "densify/grid.hpp"

namespace densify {

struct Level {
    std::int64_t density_lo = 0;  // inclusive
    std::int64_t density_hi = 0;  // inclusive
    std::int64_t sa_count = 0;
    std::int64_t target = 0;  // represented density this level is sampled toward

    bool operator==(const Level&) const = default;
};

struct LevelPartition {
    std::vector<Level> levels;
    std::int64_t requested_levels = 0;

    /// Level whose interval contains `density`, or nullptr.
    const Level* find(std::int64_t density) const;
    std::int64_t area_count() const;

    bool operator==(const LevelPartition&) const = default;
};

/// Sum of squared deviations of the level sizes from N / requested_levels.
double partition_cost(const LevelPartition& partition);

/// Optimal contiguous grouping of the histogram's distinct non-zero values into
/// min(L, distinct) levels, minimizing partition_cost. Ties prefer smaller
/// earlier levels. Throws DomainError for L < 1 or a histogram with zero or
/// non-positive entries.
LevelPartition partition_levels(const DensityHistogram& nonzero_hist, std::int64_t levels);

struct PlanEntry {
    std::int64_t row = 0;
    std::int64_t col = 0;
    std::int64_t count = 0;   // original points in the area
    std::int64_t retain = 0;  // points kept, <= count
    std::int64_t target = 0;  // level target

    bool operator==(const PlanEntry&) const = default;
};

/// Retain counts for every non-empty sample area, in row-major order.
struct SamplingPlan {
    GridConfig config;
    LevelPartition partition;
    std::vector<PlanEntry> entries;
    std::uint64_t seed = 0;

    std::int64_t retained_total() const;

    bool operator==(const SamplingPlan&) const = default;
};

/// Points to keep for an area of `count` points at level `target`:
/// min(count, inverse_occupancy(target, p_sa)), everything at saturation.
std::int64_t retain_count(std::int64_t count, std::int64_t target, std::int64_t pixels_per_area);

/// Throws ConsistencyError when a non-zero grid density falls outside every level.
SamplingPlan build_plan(const DensityGrid& data_grid, const LevelPartition& partition,
                        std::int64_t pixels_per_area, std::uint64_t seed);

/// Keeps exactly plan.retain points in each area, drawn without replacement from
/// a substream keyed by (seed, row, col). Output keeps the input order; points
/// outside the viewport are dropped.
PointSet apply_plan(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                    const SamplingPlan& plan);

struct NonuniformResult {
    PointSet points;
    SamplingPlan plan;
};

/// Full pipeline. `levels` = nullopt selects the highest represented density of
/// the unsampled render, capped at the area's pixel count.
NonuniformResult nonuniform_sample(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                                   std::optional<std::int64_t> levels, std::uint64_t seed);

/// Keeps exactly floor(ratio * N) points, uniformly without replacement, in input order.
PointSet uniform_sample(const PointSet& points, double ratio, std::uint64_t seed);

}  // namespace densify
