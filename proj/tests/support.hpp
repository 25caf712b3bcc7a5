#pragma once

#include "mibf/beamforming.hpp"
#include "mibf/linalg.hpp"
#include "mibf/rng.hpp"

#include <random>

namespace testing {

using mibf::linalg::CMatrix;
using mibf::linalg::Complex;
using mibf::linalg::CVector;

inline Complex random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    const double re = n(rng);
    return {re, n(rng)};
}

inline CVector random_vector(std::mt19937_64& rng, std::size_t n) {
    CVector v(n);
    for (auto& x : v) x = random_complex(rng);
    return v;
}

inline CMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    CMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_complex(rng);
    return m;
}

/// Random scene with K receivers at coupling F.
inline mibf::Scene random_scene(std::uint64_t seed, std::size_t k, double f,
                                const mibf::CircuitParams& params = mibf::CircuitParams::defaults()) {
    auto rng = mibf::stream_rng(seed, k);
    return mibf::Scene::build(mibf::random_constellation(k, f, params, rng), params);
}

inline double rayleigh(const CMatrix& d, const CVector& u) {
    return mibf::linalg::quadratic_form(d, u).real() / mibf::linalg::dot(u, u).real();
}

} // namespace testing
