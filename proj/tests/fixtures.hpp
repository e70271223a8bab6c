#pragma once

// Scenes shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "densify/grid.hpp"

namespace densify::fixtures {

/// Data-density histogram of a 100-area scene modelled on the worked 2264-point
/// example: 96 non-empty areas, one area at the maximum density 49, densities
/// 1 and 2 shared by 6 and 3 areas, densities 3..5 shared by 7 areas, and 54
/// areas between 22 and 49. Found by search so that the optimal 12-level
/// partition puts 22 on level 6 and 29 on level 7.
inline const std::vector<HistogramEntry>& worked_histogram() {
    static const std::vector<HistogramEntry> h = {
        {1, 6},  {2, 3},  {3, 3},  {4, 2},  {5, 2},  {6, 2},  {8, 1},  {9, 3},  {10, 2}, {11, 1},
        {12, 2}, {13, 1}, {15, 3}, {16, 2}, {17, 4}, {18, 1}, {19, 1}, {20, 2}, {21, 1}, {22, 3},
        {23, 1}, {26, 1}, {28, 5}, {29, 2}, {30, 1}, {31, 1}, {32, 5}, {33, 2}, {34, 5}, {35, 4},
        {36, 6}, {37, 2}, {39, 2}, {40, 3}, {41, 3}, {42, 5}, {43, 1}, {44, 1}, {49, 1},
    };
    return h;
}

/// 40x40 pixels, 10x10 areas of 4x4 pixels.
inline GridConfig worked_config() { return {40, 40, 4}; }
inline Viewport worked_viewport() { return {0.0, 40.0, 0.0, 40.0}; }

/// Highest represented density produced by worked_scene().
inline constexpr std::int64_t kWorkedMaxRepresented = 12;

/// Per-area counts laid out on the 10x10 grid. The empty areas sit at
/// (4,5), (4,7), (5,3), (9,2) and the densest at (1,5) (zero-based row, col).
inline std::vector<std::vector<std::int64_t>> worked_counts() {
    std::vector<std::int64_t> pool;
    for (const auto& e : worked_histogram()) {
        if (e.density == 49) continue;
        for (std::int64_t i = 0; i < e.sa_count; ++i) pool.push_back(e.density);
    }
    std::mt19937 shuffle_rng(2264);
    std::shuffle(pool.begin(), pool.end(), shuffle_rng);

    std::vector<std::vector<std::int64_t>> counts(10, std::vector<std::int64_t>(10, 0));
    const std::vector<std::pair<int, int>> empty = {{4, 5}, {4, 7}, {5, 3}, {9, 2}};
    std::size_t next = 0;
    for (int r = 0; r < 10; ++r) {
        for (int c = 0; c < 10; ++c) {
            if (std::find(empty.begin(), empty.end(), std::make_pair(r, c)) != empty.end()) continue;
            if (r == 1 && c == 5) {
                counts[r][c] = 49;
                continue;
            }
            counts[r][c] = pool[next++];
        }
    }
    return counts;
}

/// Points at pixel centres. An area with count c spreads its points over its
/// first min(c, 12) pixels, so represented densities top out at 12.
inline PointSet worked_scene() {
    const auto counts = worked_counts();
    std::vector<Point> pts;
    for (int r = 0; r < 10; ++r) {
        for (int c = 0; c < 10; ++c) {
            const std::int64_t n = counts[r][c];
            const std::int64_t used = std::min<std::int64_t>(n, kWorkedMaxRepresented);
            for (std::int64_t i = 0; i < n; ++i) {
                const std::int64_t k = i % used;
                const double px = c * 4 + (k % 4) + 0.5;
                const double py = r * 4 + (k / 4) + 0.5;
                pts.push_back({px, 40.0 - py});
            }
        }
    }
    return PointSet::from_points(std::move(pts));
}

/// Points uniformly distributed inside each area, `counts` given row-major.
/// Coordinates are in pixel units with the viewport spanning the screen.
inline PointSet uniform_area_scene(const GridConfig& config, const std::vector<std::int64_t>& counts,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> pts;
    const double side = static_cast<double>(config.sa_side);
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(counts.size()); ++a) {
        const std::int64_t r = a / config.cols();
        const std::int64_t c = a % config.cols();
        for (std::int64_t i = 0; i < counts[a]; ++i) {
            // Stay strictly inside the area so no point sits on a shared edge.
            const double x = (static_cast<double>(c) + 1e-6 + unit(rng) * (1.0 - 2e-6)) * side;
            const double y_screen = (static_cast<double>(r) + 1e-6 + unit(rng) * (1.0 - 2e-6)) * side;
            pts.push_back({x, static_cast<double>(config.screen_height) - y_screen});
        }
    }
    return PointSet::from_points(std::move(pts));
}

inline Viewport screen_viewport(const GridConfig& config) {
    return {0.0, static_cast<double>(config.screen_width), 0.0, static_cast<double>(config.screen_height)};
}

}  // namespace densify::fixtures
