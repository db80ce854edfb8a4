#pragma once

#include <array>
#include <vector>

#include "pairprobe/medium.hpp"
#include "pairprobe/types.hpp"

namespace pairprobe {

/// Cubic-cell lattice over the support box.  The longest box axis gets
/// `cells_per_axis` cells; the others are over-covered with whole cells.
/// Each cell stores its mean contrast n^2 - 1, averaged over a
/// subsamples^3 midpoint lattice inside the cell.
class VolumeGrid {
 public:
  VolumeGrid(const MediumSpec& medium, int cells_per_axis, int subsamples = 4);

  const std::array<int, 3>& dims() const { return dims_; }
  int cell_count() const { return dims_[0] * dims_[1] * dims_[2]; }
  double cell_size() const { return h_; }
  double cell_volume() const { return h_ * h_ * h_; }
  /// Radius of the ball with the cell's volume.
  double equivalent_radius() const;

  int index(int i, int j, int k) const { return (k * dims_[1] + j) * dims_[0] + i; }
  Vec3 center(int idx) const;
  const Vec3& origin() const { return origin_; }

  const std::vector<double>& contrast() const { return contrast_; }
  bool zero_contrast() const { return zero_contrast_; }

  /// Indices of cells with non-zero contrast (the only ones that scatter).
  const std::vector<int>& active_cells() const { return active_; }

 private:
  std::array<int, 3> dims_{};
  double h_ = 0.0;
  Vec3 origin_ = Vec3::Zero();
  std::vector<double> contrast_;
  std::vector<int> active_;
  bool zero_contrast_ = true;
};

}  // namespace pairprobe
