#include "densify/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace densify {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below requires a positive bound");
    // Reject the tail so every residue is equally likely.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % bound;
}

double Rng::normal() {
    double u1;
    do {
        u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> sample_positions(std::size_t population, std::size_t count, Rng& rng) {
    if (count > population) throw std::invalid_argument("cannot sample more items than available");
    std::vector<std::size_t> picked;
    picked.reserve(count);
    std::size_t needed = count;
    for (std::size_t i = 0; i < population && needed > 0; ++i) {
        if (rng.below(population - i) < needed) {
            picked.push_back(i);
            --needed;
        }
    }
    return picked;
}

}  // namespace densify
