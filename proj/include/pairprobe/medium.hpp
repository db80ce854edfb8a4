#pragma once

#include <array>
#include <variant>
#include <vector>

#include "pairprobe/types.hpp"

namespace pairprobe {

/// Axis-aligned box.
struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();

  bool contains(const Vec3& x) const;
  bool contains_strictly(const Vec3& x) const;
  Vec3 extent() const { return hi - lo; }
};

struct ConstantBall {
  double n0 = 1.0;
  double radius = 1.0;
  Vec3 center = Vec3::Zero();
};

/// n(x) = 1 + (n0 - 1) exp(1 - R^2 / (R^2 - |x - c|^2)) inside the ball, 1 outside.
/// The profile is C-infinity, so any Hoelder exponent alpha in (0, 1] holds.
struct SmoothBump {
  double n0 = 1.0;
  double radius = 1.0;
  Vec3 center = Vec3::Zero();
  double alpha = 1.0;
};

/// Values on a regular lattice, trilinearly interpolated.
/// Node (i, j, k) sits at origin + spacing * (i, j, k); values are x-fastest.
struct GridProfile {
  Vec3 origin = Vec3::Zero();
  double spacing = 1.0;
  std::array<int, 3> dims{0, 0, 0};
  std::vector<double> values;
};

/// Refractive-index profile with compact support.  Immutable after construction.
class MediumSpec {
 public:
  using Profile = std::variant<ConstantBall, SmoothBump, GridProfile>;

  static MediumSpec constant_ball(double n0, double radius, const Vec3& center = Vec3::Zero());
  static MediumSpec smooth_bump(double n0, double radius, const Vec3& center = Vec3::Zero(),
                                double alpha = 1.0);
  /// The support box defaults to the lattice extent.
  static MediumSpec gridded(GridProfile grid);
  static MediumSpec gridded(GridProfile grid, const Box& support);

  /// Returns a copy with an enlarged support box; the profile must fit inside it.
  MediumSpec with_support(const Box& support) const;

  /// n(x); exactly 1 outside the support box.
  double index_at(const Vec3& x) const;

  const Box& support() const { return support_; }
  double n_max() const { return n_max_; }
  const Profile& profile() const { return profile_; }

  /// True when n == 1 everywhere (no solve is ever needed).
  bool is_vacuum() const { return vacuum_; }

 private:
  MediumSpec(Profile profile, const Box& support);
  double profile_value(const Vec3& x) const;

  Profile profile_;
  Box support_;
  double n_max_ = 1.0;
  bool vacuum_ = false;
};

double evaluate_index(const MediumSpec& medium, const Vec3& x);

}  // namespace pairprobe
