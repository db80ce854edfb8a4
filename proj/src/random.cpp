#include "pairprobe/random.hpp"

#include <cmath>
#include <random>

namespace pairprobe {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 53-bit uniform on [0, 1); avoids the implementation-defined distributions of <random>.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return splitmix(splitmix(splitmix(splitmix(seed) ^ a) ^ b) ^ c);
}

CMatrix uniform_disk_matrix(int rows, int cols, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CMatrix out(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double r = std::sqrt(unit_draw(rng));
      const double phi = 2.0 * kPi * unit_draw(rng);
      out(i, j) = radius * std::polar(r, phi);
    }
  return out;
}

Vec3 uniform_ball_point(double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  while (true) {
    Vec3 v(2 * unit_draw(rng) - 1, 2 * unit_draw(rng) - 1, 2 * unit_draw(rng) - 1);
    if (v.squaredNorm() <= 1.0) return radius * v;
  }
}

}  // namespace pairprobe
