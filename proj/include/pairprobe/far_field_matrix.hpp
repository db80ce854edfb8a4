#pragma once

#include <string_view>
#include <vector>

#include "pairprobe/types.hpp"

namespace pairprobe {

enum class FieldKind { background, single_inclusion, double_inclusion };

std::string_view to_string(FieldKind kind);
FieldKind field_kind_from_string(std::string_view s);

/// Backscatter-convention data: entry (i, j) is the pattern observed at
/// x = -theta_i under incidence theta_j.
struct FarFieldMatrix {
  FieldKind kind = FieldKind::background;
  CMatrix values;
  std::vector<Vec3> directions;

  int size() const { return static_cast<int>(directions.size()); }
  cplx operator()(int i, int j) const { return values(i, j); }
};

/// Step-1 output: +/- the total field at a point for every incidence direction.
struct TotalFieldVector {
  Vec3 point = Vec3::Zero();
  CVector values;
  bool sign_resolved = false;
};

struct GreenEstimate {
  Vec3 z1 = Vec3::Zero();
  Vec3 z2 = Vec3::Zero();
  cplx value{};             ///< estimate of G(z1, z2), the (1,2) entry of `matrix`
  Eigen::Matrix2cd matrix;  ///< full 2x2 reconstruction of the off-diagonal Green matrix
  double l_v = 0.0;         ///< smallest singular value of V V^T
};

struct IndexEstimate {
  Vec3 point = Vec3::Zero();
  cplx value{};
  double imag_abs() const { return std::abs(value.imag()); }
};

}  // namespace pairprobe
