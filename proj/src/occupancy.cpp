#include "densify/occupancy.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace densify {

void TossParams::validate() const {
    if (pixels < 1) throw DomainError("pixel count must be at least 1, got " + std::to_string(pixels));
    if (points < 0) throw DomainError("point count must be non-negative, got " + std::to_string(points));
}

bool CollisionCounts::operator==(const CollisionCounts& other) const {
    return params.points == other.params.points && params.pixels == other.params.pixels &&
           counts == other.counts && total == other.total;
}

double CollisionPmf::probability(std::int64_t collisions) const {
    auto it = mass.find(collisions);
    return it == mass.end() ? 0.0 : it->second;
}

double CollisionPmf::sum() const {
    double s = 0.0;
    for (const auto& [k, pr] : mass) s += pr;
    return s;
}

double CollisionPmf::mean() const {
    double s = 0.0;
    for (const auto& [k, pr] : mass) s += static_cast<double>(k) * pr;
    return s;
}

double ratio_to_double(const BigInt& num, const BigInt& den) {
    if (den <= 0) throw DomainError("ratio denominator must be positive");
    if (num == 0) return 0.0;
    const bool negative = num < 0;
    const BigInt a = negative ? BigInt(-num) : num;
    // Scale so the integer quotient carries ~64 significant bits, then undo the scale.
    const long shift = 64 + static_cast<long>(msb(den)) - static_cast<long>(msb(a));
    BigInt q = shift >= 0 ? BigInt((a << shift) / den) : BigInt(a / (den << -shift));
    const double value = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
    return negative ? -value : value;
}

CollisionCounts collision_counts(TossParams params) {
    params.validate();
    if (params.points > kMaxExactPoints || params.pixels > kMaxExactPixels) {
        throw SizeError("exact pmf limited to n <= " + std::to_string(kMaxExactPoints) + " and p <= " +
                        std::to_string(kMaxExactPixels));
    }
    const std::int64_t n = params.points;
    const std::int64_t p = params.pixels;

    CollisionCounts result;
    result.params = params;
    result.total = pow(BigInt(p), static_cast<unsigned>(n));
    if (n == 0) {
        result.counts[0] = 1;
        return result;
    }

    const std::int64_t max_distinct = std::min(n, p);

    // powers[i] = i^n
    std::vector<BigInt> powers(max_distinct + 1);
    for (std::int64_t i = 0; i <= max_distinct; ++i) powers[i] = pow(BigInt(i), static_cast<unsigned>(n));

    // pascal holds row m of the binomial triangle; choose_p = C(p, m).
    std::vector<BigInt> pascal{1};
    BigInt choose_p = 1;
    for (std::int64_t m = 1; m <= max_distinct; ++m) {
        pascal.push_back(0);
        for (std::int64_t j = m; j > 0; --j) pascal[j] += pascal[j - 1];
        choose_p = choose_p * (p - m + 1) / m;

        // Surj(n, m): assignments of n labelled points onto exactly m given pixels.
        BigInt surj = 0;
        for (std::int64_t j = 0; j <= m; ++j) {
            if (j % 2 == 0)
                surj += pascal[j] * powers[m - j];
            else
                surj -= pascal[j] * powers[m - j];
        }
        if (surj != 0) result.counts[n - m] = choose_p * surj;
    }
    return result;
}

CollisionCounts brute_force_counts(TossParams params) {
    params.validate();
    const std::int64_t n = params.points;
    const std::int64_t p = params.pixels;

    std::int64_t assignments = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        if (assignments > kMaxEnumeration / p) {
            throw SizeError("brute-force enumeration limited to p^n <= " + std::to_string(kMaxEnumeration));
        }
        assignments *= p;
    }

    std::vector<std::uint64_t> tally(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::int64_t> digits(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> hits(static_cast<std::size_t>(p), 0);
    // Every point starts on pixel 0.
    hits[0] = n;
    std::int64_t distinct = n > 0 ? 1 : 0;

    for (std::int64_t a = 0; a < assignments; ++a) {
        ++tally[static_cast<std::size_t>(n - distinct)];
        // Odometer increment, keeping `distinct` current.
        for (std::int64_t d = 0; d < n; ++d) {
            auto& digit = digits[d];
            if (--hits[digit] == 0) --distinct;
            digit = digit + 1 == p ? 0 : digit + 1;
            if (hits[digit]++ == 0) ++distinct;
            if (digit != 0) break;
        }
    }

    CollisionCounts result;
    result.params = params;
    result.total = assignments;
    for (std::size_t k = 0; k < tally.size(); ++k) {
        if (tally[k] != 0) result.counts[static_cast<std::int64_t>(k)] = tally[k];
    }
    return result;
}

CollisionPmf to_pmf(const CollisionCounts& counts) {
    CollisionPmf pmf;
    pmf.params = counts.params;
    for (const auto& [k, c] : counts.counts) pmf.mass[k] = ratio_to_double(c, counts.total);
    return pmf;
}

std::int64_t inverse_occupancy(double target, std::int64_t pixels) {
    if (pixels < 1) throw DomainError("pixel count must be at least 1");
    const auto p = static_cast<double>(pixels);
    if (!(target >= 0.0 && target <= p)) {
        throw DomainError("target occupancy " + std::to_string(target) + " outside [0, " + std::to_string(pixels) +
                          "]");
    }
    if (target == p) return kRetainAll;

    auto occupied = [pixels](std::int64_t n) { return expected_occupied(n, pixels); };

    // Smallest n with occupied(n) >= target.
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    while (occupied(hi) < target) {
        lo = hi;
        hi *= 2;
    }
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (occupied(mid) < target)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo > 0 && std::abs(occupied(lo - 1) - target) <= std::abs(occupied(lo) - target)) return lo - 1;
    return lo;
}

DecayFit uniform_ratio_for_decay(std::int64_t low_count, std::int64_t high_count, std::int64_t pixels,
                                 double max_decay) {
    if (pixels < 1) throw DomainError("pixel count must be at least 1");
    if (!(low_count > 0 && low_count < high_count)) throw DomainError("counts must satisfy 0 < n1 < n2");
    if (!(max_decay > 0.0 && max_decay < 1.0)) throw DomainError("max_decay must lie in (0, 1)");

    const double true_ratio = static_cast<double>(high_count) / static_cast<double>(low_count);
    const double bound = true_ratio * (1.0 - max_decay);

    auto fit_at = [&](std::int64_t step) {
        DecayFit fit;
        fit.ratio = static_cast<double>(step) / static_cast<double>(high_count);
        fit.kept_high = step;
        // round(step * n1 / n2), half away from zero, in integers.
        fit.kept_low = (2 * step * low_count + high_count) / (2 * high_count);
        if (fit.kept_low == 0) return std::optional<DecayFit>{};
        fit.displayed_ratio = expected_occupied(fit.kept_high, pixels) / expected_occupied(fit.kept_low, pixels);
        fit.decay = 1.0 - fit.displayed_ratio / true_ratio;
        fit.satisfied = fit.displayed_ratio >= bound;
        return std::optional<DecayFit>{fit};
    };

    // Rounding s * n1 makes the displayed ratio wobble between neighbouring grid
    // steps, so scan downward for the largest qualifying step.
    std::optional<DecayFit> least_decay;
    for (std::int64_t step = high_count; step >= 1; --step) {
        auto fit = fit_at(step);
        if (!fit) break;
        if (fit->satisfied) return *fit;
        if (!least_decay || fit->decay < least_decay->decay) least_decay = fit;
    }
    if (!least_decay) throw DomainError("no sampling ratio keeps both areas non-empty");
    return *least_decay;
}

}  // namespace densify
