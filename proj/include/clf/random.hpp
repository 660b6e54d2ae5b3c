#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace clf::rnd {

// Hand-rolled draws keep runs reproducible across standard libraries; the
// std:: distributions are implementation-defined.

inline double uniform01(std::mt19937_64& rng) {
    return std::ldexp(static_cast<double>(rng() >> 11), -53);  // [0, 1)
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline double gaussian(std::mt19937_64& rng) {
    // Box-Muller; u1 bounded away from zero.
    const double u1 = std::max(uniform01(rng), 1e-300);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double exponential(std::mt19937_64& rng) {
    return -std::log(std::max(uniform01(rng), 1e-300));
}

}  // namespace clf::rnd
