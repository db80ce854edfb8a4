#pragma once

#include <vector>

#include "pairprobe/types.hpp"

namespace pairprobe {

/// Partial-wave solution for a homogeneous penetrable ball (index n0, radius R)
/// in free space.  Field conventions match MediumSolver: the far-field pattern
/// is normalised against e^{i kappa r} / (4 pi r).
class MieBall {
 public:
  MieBall(double n0, double radius, double kappa, const Vec3& center = Vec3::Zero());

  /// Total field at x for incidence theta.
  cplx total_field(const Vec3& theta, const Vec3& x) const;
  cplx far_field(const Vec3& theta, const Vec3& xhat) const;

  /// Green function G(x, center) of the ball medium with the source at its center.
  cplx center_green(const Vec3& x) const;
  /// Far field G^inf(xhat, center).
  cplx center_green_far_field(const Vec3& xhat) const;

  /// Number of partial waves kept for plane-wave incidence.
  int order() const { return static_cast<int>(b_.size()); }

 private:
  /// Series in the ball's own frame (center at the origin).
  cplx total_field_local(const Vec3& theta, const Vec3& x) const;

  double n0_, radius_, kappa_;
  Vec3 center_;
  std::vector<cplx> b_;  ///< exterior scattering coefficients
  std::vector<cplx> c_;  ///< interior transmission coefficients
  cplx source_interior_ = 0.0;  ///< A in G = Phi_{k1} + A j0(k1 r) inside
  cplx source_exterior_ = 0.0;  ///< B in G = B h0(kappa r) outside
};

cplx mie_ball_total_field(double n0, double radius, double kappa, const Vec3& theta, const Vec3& x);
cplx mie_ball_far_field(double n0, double radius, double kappa, const Vec3& theta, const Vec3& xhat);

}  // namespace pairprobe
