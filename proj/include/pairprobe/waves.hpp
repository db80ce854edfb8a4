#pragma once

#include <vector>

#include "pairprobe/types.hpp"

namespace pairprobe {

/// Deterministic, well-spread unit vectors (Fibonacci sphere).  `offset`
/// rotates the azimuths by whole golden-angle steps, giving a different but
/// equally reproducible set.
std::vector<Vec3> fibonacci_directions(int count, int offset = 0);

/// Wavenumber and incidence directions.  Immutable after construction.
class WaveConfig {
 public:
  static constexpr int kDefaultDirections = 6;
  static constexpr double kDefaultKappaMax = 50.0;

  WaveConfig(double kappa, std::vector<Vec3> directions, double kappa_max = kDefaultKappaMax);
  static WaveConfig fibonacci(double kappa, int count = kDefaultDirections, int offset = 0);

  double kappa() const { return kappa_; }
  double kappa_max() const { return kappa_max_; }
  const std::vector<Vec3>& directions() const { return directions_; }
  int size() const { return static_cast<int>(directions_.size()); }

 private:
  double kappa_;
  double kappa_max_;
  std::vector<Vec3> directions_;
};

}  // namespace pairprobe
