#include "pairprobe/mie.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairprobe/errors.hpp"

namespace pairprobe {
namespace {

// Beyond this argument the downward-stable library recursions lose digits.
constexpr double kMaxArgument = 200.0;

cplx hankel(int l, double x) { return {std::sph_bessel(l, x), std::sph_neumann(l, x)}; }

// f_l'(x) = f_{l-1}(x) - (l + 1)/x f_l(x), with f_{-1}' handled via f_0' = -f_1.
double bessel_prime(int l, double x) {
  if (l == 0) return -std::sph_bessel(1, x);
  return std::sph_bessel(l - 1, x) - (l + 1) / x * std::sph_bessel(l, x);
}

cplx hankel_prime(int l, double x) {
  if (l == 0) return -hankel(1, x);
  return hankel(l - 1, x) - static_cast<double>(l + 1) / x * hankel(l, x);
}

cplx ipow(int l) {
  static const cplx cycle[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return cycle[l % 4];
}

int truncation_order(double x) {
  return static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 12.0));
}

}  // namespace

MieBall::MieBall(double n0, double radius, double kappa, const Vec3& center)
    : n0_(n0), radius_(radius), kappa_(kappa), center_(center) {
  if (!(n0 > 0.0 && radius > 0.0 && kappa > 0.0))
    throw ConfigError("mie: n0, radius and kappa must be positive");
  const double x = kappa * radius;
  const double x1 = kappa * n0 * radius;
  if (x1 > kMaxArgument || x > kMaxArgument) {
    std::ostringstream os;
    os << "mie: size parameter " << std::max(x, x1) << " beyond stable range " << kMaxArgument;
    throw TruncationError(os.str());
  }
  const double k = kappa;
  const double k1 = kappa * n0;
  const int lmax = truncation_order(std::max(x, x1));
  for (int l = 0; l <= lmax; ++l) {
    const double j = std::sph_bessel(l, x);
    const double j1 = std::sph_bessel(l, x1);
    const cplx h = hankel(l, x);
    const cplx c = k * (kI / (x * x)) / (k * hankel_prime(l, x) * j1 - k1 * bessel_prime(l, x1) * h);
    c_.push_back(c);
    b_.push_back((c * j1 - j) / h);
  }

  // Point source at the center: match value and radial derivative at r = R.
  const cplx phi_in = kI * k1 / (4.0 * kPi) * hankel(0, x1);
  const cplx dphi_in = kI * k1 / (4.0 * kPi) * k1 * hankel_prime(0, x1);
  const double j0 = std::sph_bessel(0, x1);
  const double dj0 = k1 * bessel_prime(0, x1);
  const cplx h0 = hankel(0, x);
  const cplx dh0 = k * hankel_prime(0, x);
  // phi_in + A j0 = B h0,  dphi_in + A dj0 = B dh0.
  const cplx det = j0 * dh0 - dj0 * h0;
  source_interior_ = (h0 * dphi_in - dh0 * phi_in) / det;
  source_exterior_ = (j0 * dphi_in - dj0 * phi_in) / det;
}

cplx MieBall::total_field_local(const Vec3& theta, const Vec3& x) const {
  const double r = x.norm();
  if (r == 0.0) return c_[0] * std::sph_bessel(0, 0.0);
  const double cos_t = std::clamp(x.dot(theta) / r, -1.0, 1.0);
  const bool inside = r < radius_;
  const double arg = inside ? kappa_ * n0_ * r : kappa_ * r;
  if (arg > kMaxArgument) throw TruncationError("mie: evaluation point beyond stable range");
  if (!inside) {
    // Scattered part only; the incident plane wave is added in closed form.
    cplx acc = 0.0;
    for (int l = 0; l < static_cast<int>(b_.size()); ++l)
      acc += ipow(l) * (2.0 * l + 1.0) * b_[l] * hankel(l, arg) * std::legendre(l, cos_t);
    return std::exp(kI * (kappa_ * x.dot(theta))) + acc;
  }
  cplx acc = 0.0;
  for (int l = 0; l < static_cast<int>(c_.size()); ++l)
    acc += ipow(l) * (2.0 * l + 1.0) * c_[l] * std::sph_bessel(l, arg) * std::legendre(l, cos_t);
  return acc;
}

cplx MieBall::total_field(const Vec3& theta, const Vec3& x) const {
  return std::exp(kI * (kappa_ * center_.dot(theta))) * total_field_local(theta, x - center_);
}

cplx MieBall::far_field(const Vec3& theta, const Vec3& xhat) const {
  const double cos_t = std::clamp(xhat.dot(theta), -1.0, 1.0);
  cplx acc = 0.0;
  for (int l = 0; l < static_cast<int>(b_.size()); ++l)
    acc += (2.0 * l + 1.0) * b_[l] * std::legendre(l, cos_t);
  const cplx shift = std::exp(kI * (kappa_ * center_.dot(theta - xhat)));
  return shift * (4.0 * kPi / kappa_) * (-kI) * acc;
}

cplx MieBall::center_green(const Vec3& x) const {
  const double r = (x - center_).norm();
  if (r == 0.0) throw NumericalError("mie: center_green evaluated at the source");
  const double k1 = kappa_ * n0_;
  if (r < radius_)
    return std::exp(kI * (k1 * r)) / (4.0 * kPi * r) + source_interior_ * std::sph_bessel(0, k1 * r);
  return source_exterior_ * hankel(0, kappa_ * r);
}

cplx MieBall::center_green_far_field(const Vec3& xhat) const {
  return std::exp(-kI * (kappa_ * xhat.dot(center_))) * (-4.0 * kPi * kI * source_exterior_ / kappa_);
}

cplx mie_ball_total_field(double n0, double radius, double kappa, const Vec3& theta, const Vec3& x) {
  return MieBall(n0, radius, kappa).total_field(theta, x);
}

cplx mie_ball_far_field(double n0, double radius, double kappa, const Vec3& theta, const Vec3& xhat) {
  return MieBall(n0, radius, kappa).far_field(theta, xhat);
}

}  // namespace pairprobe
