#include "pairprobe/volume_grid.hpp"

#include <cmath>

#include "pairprobe/errors.hpp"

namespace pairprobe {

VolumeGrid::VolumeGrid(const MediumSpec& medium, int cells_per_axis, int subsamples) {
  if (cells_per_axis < 2) throw ConfigError("solver: cells_per_axis must be at least 2");
  if (subsamples < 1) throw ConfigError("solver: subsamples must be at least 1");
  const Box& box = medium.support();
  const Vec3 ext = box.extent();
  h_ = ext.maxCoeff() / cells_per_axis;
  for (int d = 0; d < 3; ++d) dims_[d] = std::max(1, static_cast<int>(std::ceil(ext[d] / h_ - 1e-9)));
  origin_ = box.lo;

  contrast_.assign(cell_count(), 0.0);
  const double w = 1.0 / (subsamples * subsamples * subsamples);
  for (int k = 0; k < dims_[2]; ++k)
    for (int j = 0; j < dims_[1]; ++j)
      for (int i = 0; i < dims_[0]; ++i) {
        const Vec3 corner = origin_ + h_ * Vec3(i, j, k);
        double acc = 0.0;
        for (int c = 0; c < subsamples; ++c)
          for (int b = 0; b < subsamples; ++b)
            for (int a = 0; a < subsamples; ++a) {
              const Vec3 x = corner + (h_ / subsamples) * Vec3(a + 0.5, b + 0.5, c + 0.5);
              const double n = medium.index_at(x);
              acc += n * n - 1.0;
            }
        const int idx = index(i, j, k);
        contrast_[idx] = acc * w;
        if (contrast_[idx] != 0.0) active_.push_back(idx);
      }
  zero_contrast_ = active_.empty();
}

double VolumeGrid::equivalent_radius() const { return std::cbrt(3.0 / (4.0 * kPi)) * h_; }

Vec3 VolumeGrid::center(int idx) const {
  const int i = idx % dims_[0];
  const int j = (idx / dims_[0]) % dims_[1];
  const int k = idx / (dims_[0] * dims_[1]);
  return origin_ + h_ * Vec3(i + 0.5, j + 0.5, k + 0.5);
}

}  // namespace pairprobe
