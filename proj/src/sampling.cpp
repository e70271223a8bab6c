#include "densify/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "densify/occupancy.hpp"
#include "densify/random.hpp"

namespace densify {

const Level* LevelPartition::find(std::int64_t density) const {
    auto it = std::lower_bound(levels.begin(), levels.end(), density,
                               [](const Level& l, std::int64_t d) { return l.density_hi < d; });
    if (it == levels.end() || density < it->density_lo) return nullptr;
    return &*it;
}

std::int64_t LevelPartition::area_count() const {
    std::int64_t n = 0;
    for (const auto& l : levels) n += l.sa_count;
    return n;
}

double partition_cost(const LevelPartition& partition) {
    if (partition.levels.empty() || partition.requested_levels < 1) return 0.0;
    const double ideal = static_cast<double>(partition.area_count()) / static_cast<double>(partition.requested_levels);
    double cost = 0.0;
    for (const auto& l : partition.levels) {
        const double d = static_cast<double>(l.sa_count) - ideal;
        cost += d * d;
    }
    return cost;
}

LevelPartition partition_levels(const DensityHistogram& nonzero_hist, std::int64_t levels) {
    if (levels < 1) throw DomainError("level count must be at least 1");
    const auto& entries = nonzero_hist.entries;
    if (entries.empty()) throw DomainError("cannot partition an empty histogram");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].density <= 0 || entries[i].sa_count <= 0) {
            throw DomainError("partition needs positive densities with positive area counts");
        }
        if (i > 0 && entries[i].density <= entries[i - 1].density) {
            throw DomainError("histogram densities must be strictly increasing");
        }
    }

    const auto distinct = static_cast<std::int64_t>(entries.size());
    const std::int64_t groups = std::min(levels, distinct);

    std::vector<std::int64_t> prefix(distinct + 1, 0);
    for (std::int64_t i = 0; i < distinct; ++i) prefix[i + 1] = prefix[i] + entries[i].sa_count;
    const std::int64_t total = prefix[distinct];

    // Costs are scaled by L^2 so they stay integral: (L * c - N)^2.
    using Cost = __int128;
    const Cost kInf = std::numeric_limits<Cost>::max() / 4;
    auto segment = [&](std::int64_t from, std::int64_t to) {
        const Cost dev = Cost(levels) * (prefix[to] - prefix[from]) - total;
        return dev * dev;
    };

    // best[g][i]: minimal cost of splitting values [i, distinct) into g groups.
    std::vector<std::vector<Cost>> best(groups + 1, std::vector<Cost>(distinct + 1, kInf));
    best[0][distinct] = 0;
    for (std::int64_t g = 1; g <= groups; ++g) {
        for (std::int64_t i = distinct - g; i >= 0; --i) {
            Cost current = kInf;
            for (std::int64_t j = i + 1; j <= distinct - (g - 1); ++j) {
                const Cost seg = segment(i, j);
                const bool oversized = Cost(levels) * (prefix[j] - prefix[i]) > total;
                if (oversized && seg >= current) break;  // grows monotonically from here on
                if (best[g - 1][j] == kInf) continue;
                current = std::min(current, seg + best[g - 1][j]);
            }
            best[g][i] = current;
        }
    }

    // Forward walk taking the shortest optimal first group at each step.
    LevelPartition partition;
    partition.requested_levels = levels;
    std::int64_t start = 0;
    for (std::int64_t g = groups; g >= 1; --g) {
        std::int64_t end = start + 1;
        for (; end <= distinct - (g - 1); ++end) {
            if (best[g - 1][end] != kInf && segment(start, end) + best[g - 1][end] == best[g][start]) break;
        }
        Level level;
        level.density_lo = entries[start].density;
        level.density_hi = entries[end - 1].density;
        level.sa_count = prefix[end] - prefix[start];
        level.target = groups - g + 1;
        partition.levels.push_back(level);
        start = end;
    }
    return partition;
}

std::int64_t SamplingPlan::retained_total() const {
    std::int64_t n = 0;
    for (const auto& e : entries) n += e.retain;
    return n;
}

std::int64_t retain_count(std::int64_t count, std::int64_t target, std::int64_t pixels_per_area) {
    if (target < 0 || target > pixels_per_area) {
        throw ConsistencyError("level target " + std::to_string(target) + " exceeds the " +
                               std::to_string(pixels_per_area) + " pixels of a sample area");
    }
    return std::min(count, inverse_occupancy(static_cast<double>(target), pixels_per_area));
}

SamplingPlan build_plan(const DensityGrid& data_grid, const LevelPartition& partition,
                        std::int64_t pixels_per_area, std::uint64_t seed) {
    if (data_grid.kind != DensityKind::data) throw ConsistencyError("sampling plans are built from data densities");
    SamplingPlan plan;
    plan.config = data_grid.config;
    plan.partition = partition;
    plan.seed = seed;
    for (Eigen::Index r = 0; r < data_grid.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < data_grid.values.cols(); ++c) {
            const std::int64_t count = data_grid.values(r, c);
            if (count == 0) continue;
            const Level* level = partition.find(count);
            if (level == nullptr) {
                throw ConsistencyError("data density " + std::to_string(count) + " is not covered by the partition");
            }
            plan.entries.push_back({r, c, count, retain_count(count, level->target, pixels_per_area), level->target});
        }
    }
    return plan;
}

PointSet apply_plan(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                    const SamplingPlan& plan) {
    if (!(plan.config == config)) throw ConsistencyError("plan was built for a different grid config");
    const Projection proj = project(points, viewport, config);

    // Members of each area, in input order.
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(config.area_count()));
    for (std::size_t i = 0; i < proj.pixels.size(); ++i) {
        const SampleArea a = area_of(proj.pixels[i], config);
        members[static_cast<std::size_t>(a.row * config.cols() + a.col)].push_back(proj.source[i]);
    }

    std::vector<char> keep(points.size(), 0);
    std::size_t planned_points = 0;
    for (const PlanEntry& e : plan.entries) {
        if (e.row < 0 || e.row >= config.rows() || e.col < 0 || e.col >= config.cols()) {
            throw ConsistencyError("plan entry outside the grid");
        }
        const auto& area = members[static_cast<std::size_t>(e.row * config.cols() + e.col)];
        if (static_cast<std::int64_t>(area.size()) != e.count || e.retain < 0 || e.retain > e.count) {
            throw ConsistencyError("plan does not match the scene at area (" + std::to_string(e.row) + ", " +
                                   std::to_string(e.col) + ")");
        }
        planned_points += area.size();
        Rng rng(substream_seed(plan.seed, {static_cast<std::uint64_t>(e.row), static_cast<std::uint64_t>(e.col)}));
        for (std::size_t pos : sample_positions(area.size(), static_cast<std::size_t>(e.retain), rng)) {
            keep[area[pos]] = 1;
        }
    }
    if (planned_points != proj.pixels.size()) throw ConsistencyError("plan does not cover every non-empty area");

    PointSet out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (keep[i]) out.push_back(points.points[i], points.ids[i]);
    }
    return out;
}

NonuniformResult nonuniform_sample(const PointSet& points, const Viewport& viewport, const GridConfig& config,
                                   std::optional<std::int64_t> levels, std::uint64_t seed) {
    config.validate();
    if (levels && *levels < 1) throw DomainError("level count must be at least 1");

    NonuniformResult result;
    result.plan.config = config;
    result.plan.seed = seed;

    const Projection proj = project(points, viewport, config);
    const DensityGrid data = data_density_grid(proj, config);
    if (data.total() == 0) return result;

    const std::int64_t p_sa = config.pixels_per_area();
    std::int64_t level_count = 0;
    if (levels) {
        level_count = *levels;
    } else {
        const Raster raster = rasterize(proj.pixels, config);
        level_count = represented_density_grid(raster, config).max();
    }
    level_count = std::min(level_count, p_sa);

    const LevelPartition partition = partition_levels(histogram(data).nonzero(), level_count);
    result.plan = build_plan(data, partition, p_sa, seed);
    result.points = apply_plan(points, viewport, config, result.plan);
    return result;
}

PointSet uniform_sample(const PointSet& points, double ratio, std::uint64_t seed) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw DomainError("sampling ratio must lie in [0, 1]");
    const std::size_t n = points.size();
    // The epsilon absorbs representation error in ratios such as 0.8.
    auto keep = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
    keep = std::min(keep, n);

    Rng rng(substream_seed(seed, {}));
    PointSet out;
    out.points.reserve(keep);
    out.ids.reserve(keep);
    for (std::size_t pos : sample_positions(n, keep, rng)) out.push_back(points.points[pos], points.ids[pos]);
    return out;
}

}  // namespace densify
