#include "pairprobe/waves.hpp"

#include <cmath>

#include "pairprobe/errors.hpp"

namespace pairprobe {

std::vector<Vec3> fibonacci_directions(int count, int offset) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = (k + offset) * golden;
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

WaveConfig::WaveConfig(double kappa, std::vector<Vec3> directions, double kappa_max)
    : kappa_(kappa), kappa_max_(kappa_max), directions_(std::move(directions)) {
  if (!(kappa > 0.0) || !(kappa <= kappa_max_))
    throw ConfigError("waves: kappa must lie in (0, kappa_max]");
  if (directions_.size() < 2) throw ConfigError("waves: at least 2 directions are required");
  for (auto& d : directions_) {
    if (std::abs(d.norm() - 1.0) > 1e-12) throw ConfigError("waves: directions must be unit vectors");
  }
  for (std::size_t i = 0; i < directions_.size(); ++i)
    for (std::size_t j = i + 1; j < directions_.size(); ++j)
      if ((directions_[i] - directions_[j]).norm() < 1e-12)
        throw ConfigError("waves: directions must be pairwise distinct");
}

WaveConfig WaveConfig::fibonacci(double kappa, int count, int offset) {
  return WaveConfig(kappa, fibonacci_directions(count, offset));
}

}  // namespace pairprobe
