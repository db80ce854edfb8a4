#pragma once

#include <vector>

#include "pairprobe/medium.hpp"
#include "pairprobe/types.hpp"

namespace pairprobe {

/// One experiment: a single inclusion, or two close inclusions deployed together.
struct Probe {
  std::vector<Vec3> centers;

  static Probe single(const Vec3& z) { return Probe{{z}}; }
  /// z2 = z1 + separation * axis / |axis|.
  static Probe pair(const Vec3& z1, const Vec3& axis, double separation);

  bool is_pair() const { return centers.size() == 2; }
  double separation() const;
};

struct LayoutParams {
  double a = 0.01;   ///< inclusion radius
  double h = 0.25;   ///< impedance exponent, lambda_0 = 1 - a^h
  double t = 0.25;   ///< closeness exponent, pair separation ~ a^t
  double s = 0.0;    ///< cloud-size exponent; recorded, the one-group-at-a-time protocol never uses it
  double d_min = 0.5;
  double d_max = 2.0;
  static constexpr double beta = 1.0;

  double nominal_separation() const;
};

enum class WindowPolicy {
  enforce,        ///< reject h <= 0 or h + 2t >= 1
  allow_outside,  ///< contrast experiments only; every geometric invariant still holds
};

/// Probe positions and inclusion parameters.  Immutable after construction.
class InclusionLayout {
 public:
  InclusionLayout(LayoutParams params, std::vector<Probe> probes, const Box& omega,
                  WindowPolicy policy = WindowPolicy::enforce);

  const LayoutParams& params() const { return params_; }
  const std::vector<Probe>& probes() const { return probes_; }
  const Box& omega() const { return omega_; }
  WindowPolicy policy() const { return policy_; }
  double a() const { return params_.a; }
  double h() const { return params_.h; }
  double t() const { return params_.t; }

  /// Same probes, new exponents (the geometry is rebuilt by the caller).
  InclusionLayout with_probes(std::vector<Probe> probes) const;

 private:
  LayoutParams params_;
  std::vector<Probe> probes_;
  Box omega_;
  WindowPolicy policy_;
};

/// Checks h and t only; throws LayoutError.
void validate_exponents(double h, double t, WindowPolicy policy);

/// Pairs with separation d_scale * a^t along the given axes, anchored at the given points.
std::vector<Probe> make_pairs(const std::vector<Vec3>& anchors, const std::vector<Vec3>& axes,
                              double a, double t, double d_scale = 1.0);

}  // namespace pairprobe
