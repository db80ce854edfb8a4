#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace pairprobe {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace pairprobe
