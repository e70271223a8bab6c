#pragma once

// Occupancy statistics for tossing n points uniformly at random onto p pixels.
//
// Terminology: a toss of n points activates m distinct pixels; the remaining
// k = n - m points are collisions, and p - m pixels stay free.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "densify/errors.hpp"

namespace densify {

using BigInt = boost::multiprecision::cpp_int;

struct TossParams {
    std::int64_t points = 0;
    std::int64_t pixels = 1;

    /// Throws DomainError unless points >= 0 and pixels >= 1.
    void validate() const;
};

/// Largest inputs accepted by the exact big-integer pmf.
inline constexpr std::int64_t kMaxExactPoints = 512;
inline constexpr std::int64_t kMaxExactPixels = 4096;
/// Largest p^n the brute-force enumerator will walk.
inline constexpr std::int64_t kMaxEnumeration = 10'000'000;

/// Exact number of point-to-pixel assignments producing each collision count.
/// Zero-count entries are omitted; `total` is p^n.
struct CollisionCounts {
    TossParams params;
    std::map<std::int64_t, BigInt> counts;
    BigInt total;

    bool operator==(const CollisionCounts& other) const;
};

struct CollisionPmf {
    TossParams params;
    std::map<std::int64_t, double> mass;

    /// Pr(k); zero for keys outside the support.
    double probability(std::int64_t collisions) const;
    double sum() const;
    double mean() const;
};

/// Closed-form exact counts: count(k) = C(p, m) * Surj(n, m) with m = n - k.
CollisionCounts collision_counts(TossParams params);

/// Enumerates every one of the p^n assignments. Independent of collision_counts.
CollisionCounts brute_force_counts(TossParams params);

CollisionPmf to_pmf(const CollisionCounts& counts);

inline CollisionPmf collision_pmf(TossParams params) { return to_pmf(collision_counts(params)); }
inline CollisionPmf brute_force_pmf(TossParams params) { return to_pmf(brute_force_counts(params)); }

/// num / den rounded to double without overflowing on huge operands.
double ratio_to_double(const BigInt& num, const BigInt& den);

/// Expected number of distinct occupied pixels, p * (1 - (1 - 1/p)^n).
template <typename Scalar = double>
Scalar expected_occupied(std::int64_t points, std::int64_t pixels) {
    TossParams{points, pixels}.validate();
    if (points == 0) return Scalar(0);
    if (pixels == 1) return Scalar(1);
    using std::expm1;
    using std::log1p;
    const Scalar p = static_cast<Scalar>(pixels);
    return -p * expm1(static_cast<Scalar>(points) * log1p(Scalar(-1) / p));
}

template <typename Scalar = double>
struct OccupancySummary {
    TossParams params;
    Scalar expected_occupied{};
    Scalar expected_collisions{};
    Scalar expected_free{};
    Scalar occupied_fraction{};   // of p
    Scalar collision_fraction{};  // of n, zero when n = 0
    Scalar free_fraction{};       // of p
};

template <typename Scalar = double>
OccupancySummary<Scalar> occupancy_summary(TossParams params) {
    OccupancySummary<Scalar> s;
    s.params = params;
    s.expected_occupied = expected_occupied<Scalar>(params.points, params.pixels);
    const auto n = static_cast<Scalar>(params.points);
    const auto p = static_cast<Scalar>(params.pixels);
    s.expected_collisions = n - s.expected_occupied;
    s.expected_free = p - s.expected_occupied;
    s.occupied_fraction = s.expected_occupied / p;
    s.collision_fraction = params.points == 0 ? Scalar(0) : s.expected_collisions / n;
    s.free_fraction = s.expected_free / p;
    return s;
}

/// Sentinel returned by inverse_occupancy when the target is full saturation.
inline constexpr std::int64_t kRetainAll = std::numeric_limits<std::int64_t>::max();

/// Smallest-error point count n' with expected_occupied(n', p) closest to `target`.
/// Ties go to the smaller count. target == p yields kRetainAll.
std::int64_t inverse_occupancy(double target, std::int64_t pixels);

/// Outcome of searching for a uniform sampling ratio that bounds ratio decay.
struct DecayFit {
    double ratio = 1.0;            // sampling fraction s
    std::int64_t kept_low = 0;     // round(s * n1)
    std::int64_t kept_high = 0;    // round(s * n2)
    double displayed_ratio = 0.0;  // E(kept_high) / E(kept_low)
    double decay = 0.0;            // 1 - displayed / (n2 / n1)
    bool satisfied = false;        // false: no s met the bound, fields hold the least-decay s
};

/// Largest s in (0, 1], on the grid j / n2, whose displayed occupancy ratio
/// keeps decay at or below max_decay.
DecayFit uniform_ratio_for_decay(std::int64_t low_count, std::int64_t high_count, std::int64_t pixels,
                                 double max_decay);

}  // namespace densify
