#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <string>

namespace lpgraph {

using Index = Eigen::Index;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrixd = DenseMatrix<double>;
using Vectord = DenseVector<double>;
using Vectori = DenseVector<int>;
using Complex = std::complex<double>;

/// Sentinel distance for vertices in different components.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// p = infinity in l^p norm arguments.
inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Rounds to 12 significant digits; reports store floats at this precision.
inline double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

/// SplitMix64 step, used to derive independent per-sample RNG seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace lpgraph
