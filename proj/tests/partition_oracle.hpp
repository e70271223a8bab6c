#pragma once

// Exhaustive reference for the level partitioner. Enumerates every way of
// cutting the distinct densities into min(L, D) contiguous groups.

#include <cstdint>
#include <limits>
#include <vector>

#include "densify/grid.hpp"

namespace densify::oracle {

/// Sum over groups of (L * size - N)^2, where N is the total area count.
inline std::int64_t scaled_cost(const std::vector<std::int64_t>& sizes, std::int64_t levels) {
    std::int64_t total = 0;
    for (auto s : sizes) total += s;
    std::int64_t cost = 0;
    for (auto s : sizes) cost += (levels * s - total) * (levels * s - total);
    return cost;
}

struct OraclePartition {
    std::vector<std::int64_t> sizes;   // areas per group
    std::vector<std::int64_t> widths;  // distinct values per group
    std::int64_t cost = 0;
};

/// Minimum scaled cost; among ties, the lexicographically smallest group widths.
inline OraclePartition exhaustive_partition(const std::vector<HistogramEntry>& entries, std::int64_t levels) {
    const auto d = static_cast<std::int64_t>(entries.size());
    const std::int64_t groups = levels < d ? levels : d;
    OraclePartition best;
    best.cost = std::numeric_limits<std::int64_t>::max();

    std::vector<std::int64_t> widths;
    auto recurse = [&](auto&& self, std::int64_t start, std::int64_t left) -> void {
        if (left == 0) {
            if (start != d) return;
            std::vector<std::int64_t> sizes;
            std::int64_t at = 0;
            for (auto w : widths) {
                std::int64_t s = 0;
                for (std::int64_t i = at; i < at + w; ++i) s += entries[static_cast<std::size_t>(i)].sa_count;
                sizes.push_back(s);
                at += w;
            }
            const std::int64_t cost = scaled_cost(sizes, levels);
            if (cost < best.cost || (cost == best.cost && widths < best.widths)) best = {sizes, widths, cost};
            return;
        }
        for (std::int64_t w = 1; start + w <= d - (left - 1); ++w) {
            widths.push_back(w);
            self(self, start + w, left - 1);
            widths.pop_back();
        }
    };
    recurse(recurse, 0, groups);
    return best;
}

}  // namespace densify::oracle
