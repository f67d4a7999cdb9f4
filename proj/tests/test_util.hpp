#pragma once

#include <cstdint>

// splitmix64-based uniform doubles. std::uniform_real_distribution is
// implementation-defined, this keeps random draws identical everywhere.
struct Rng {
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // log-uniform over [lo, hi], lo > 0
    double log_uniform(double lo, double hi);

    std::uint64_t state;
};

#include <cmath>

inline double Rng::log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
}
