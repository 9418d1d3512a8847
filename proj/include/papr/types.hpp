#pragma once

#include <Eigen/Core>
#include <complex>

namespace papr {

using Scalar = double;
using Complex = std::complex<Scalar>;
using CVec = Eigen::VectorX<Complex>;
using RVec = Eigen::VectorX<Scalar>;
using Index = Eigen::Index;

inline constexpr Scalar kPi = 3.141592653589793238462643383279502884;
inline constexpr Scalar kTwoPi = 2.0 * kPi;

}  // namespace papr
