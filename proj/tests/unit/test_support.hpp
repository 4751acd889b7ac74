#pragma once

#include <cstdint>
#include <random>

#include "edgesync/numerics.hpp"

namespace edgesync::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Vector random_vector(std::mt19937_64& g, std::size_t n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (double& x : v) x = uniform(g, lo, hi);
    return v;
}

inline Matrix random_matrix(std::mt19937_64& g, std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (double& x : m.data()) x = uniform(g, lo, hi);
    return m;
}

inline Matrix random_symmetric(std::mt19937_64& g, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(g, -1.0, 1.0);
    return m;
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace edgesync::testing
