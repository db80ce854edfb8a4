#include "pairprobe/kernel.hpp"

#include <cmath>

namespace pairprobe {

namespace {

// (sin x - x cos x) / x^3
double a_func(double x) {
  if (std::abs(x) < 0.05) {
    const double x2 = x * x;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// F(s) = int_0^s u e^{i kappa u} du
cplx radial_moment(double kappa, double s) {
  const double x = kappa * s;
  if (std::abs(x) < 1.0) {
    cplx sum = 0.0;
    cplx power = 1.0;  // (i x)^k / k!
    for (int k = 0; k < 40; ++k) {
      const cplx term = power / static_cast<double>(k + 2);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      power *= kI * x / static_cast<double>(k + 1);
    }
    return sum * s * s;
  }
  return ((1.0 - kI * x) * std::exp(kI * x) - 1.0) / (kappa * kappa);
}

}  // namespace

cplx helmholtz_kernel(double kappa, double r) {
  return std::exp(kI * (kappa * r)) / (4.0 * kPi * r);
}

cplx ball_integrated_kernel(double kappa, double ball_radius, double rho) {
  const double r = ball_radius;
  if (rho >= r) {
    return helmholtz_kernel(kappa, rho) * (4.0 * kPi * r * r * r * a_func(kappa * r));
  }
  const cplx inner = std::exp(kI * (kappa * rho)) * rho * rho * a_func(kappa * rho);
  const cplx outer = sinc(kappa * rho) * (radial_moment(kappa, r) - radial_moment(kappa, rho));
  return inner + outer;
}

}  // namespace pairprobe
