#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pathwise/path.hpp"

namespace fixtures {

/// The tent path: 0 -> 1 -> 0 on [0, 2].
inline pathwise::Path tent() { return pathwise::make_path({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}); }

/// S(t) = t on [0, horizon].
inline pathwise::Path linear(double horizon) {
    return pathwise::make_path({0.0, horizon}, {0.0, horizon});
}

inline pathwise::Path constant(double c, double horizon = 1.0) {
    return pathwise::make_path({0.0, horizon}, {c, c});
}

/// Random piecewise-linear path with `points` samples, unit-ish steps and a
/// start value drawn from [-start_spread, start_spread].
inline pathwise::Path random_path(std::uint64_t seed, int points = 40, double start_spread = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dt(0.01, 0.1);
    std::normal_distribution<double> dv(0.0, 0.3);
    std::uniform_real_distribution<double> start(-start_spread, start_spread);
    std::vector<double> t{0.0}, v{start_spread > 0.0 ? start(rng) : 0.0};
    for (int i = 1; i < points; ++i) {
        t.push_back(t.back() + dt(rng));
        v.push_back(v.back() + dv(rng));
    }
    return pathwise::make_path(std::move(t), std::move(v));
}

/// Zig-zag between lo and hi, starting at lo, with `legs` monotone legs of unit duration.
inline pathwise::Path zigzag(double lo, double hi, int legs) {
    std::vector<double> t{0.0}, v{lo};
    for (int i = 1; i <= legs; ++i) {
        t.push_back(i);
        v.push_back(i % 2 == 1 ? hi : lo);
    }
    return pathwise::make_path(std::move(t), std::move(v));
}

template <class T>
double median(std::vector<T> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace fixtures
