#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pairprobe/far_field_matrix.hpp"
#include "pairprobe/forward_model.hpp"

namespace pairprobe {

/// +/- V^t(z, theta_j) from single-inclusion backscatter data.  With
/// D = C^{-1}(U - V), the pivot j* maximises |D_jj|, v_{j*} = sqrt(-D_{j*j*})
/// (principal branch) and v_i = -D_{i j*} / v_{j*}.
TotalFieldVector extract_total_field_vector(const FarFieldMatrix& u, const FarFieldMatrix& v,
                                            double cap, const Vec3& point = Vec3::Zero());

/// Flips v2 when ||v1 + v2|| < ||v1 - v2||.
std::pair<TotalFieldVector, TotalFieldVector> align_signs(const TotalFieldVector& v1,
                                                          const TotalFieldVector& v2);

/// Green matrix estimate
///   C^{-1} (V V^T)^{-1} V (W - V^inf) V^T (V V^T)^{-1} C^{-1} + C^{-1}
/// with plain transposes; `fields` is the 2 x N0 matrix of aligned total fields.
GreenEstimate extract_green(const FarFieldMatrix& w, const FarFieldMatrix& v, const CMatrix& fields,
                            double cap, const Vec3& z1 = Vec3::Zero(), const Vec3& z2 = Vec3::Zero());

/// n = (4 pi / (i kappa)) G - 1 / (i kappa d).
IndexEstimate extract_index(const GreenEstimate& g, double kappa);

struct ProbePairRecord {
  int probe = 0;
  Vec3 z1 = Vec3::Zero();
  Vec3 z2 = Vec3::Zero();
  TotalFieldVector v1, v2;
  GreenEstimate green;
  IndexEstimate index;
  std::optional<std::string> error;  ///< set when any step failed for this pair

  // Populated when ground truth is available.
  std::optional<double> n_true;
  std::optional<cplx> g_true;
  std::optional<double> total_field_error;  ///< max_j | +/-v_j - V^t(z^1, theta_j) |, best sign

  double index_error() const { return n_true ? std::abs(index.value - *n_true) : NAN; }
  double green_error() const { return g_true ? std::abs(green.value - *g_true) : NAN; }
};

/// Steps 1-3 for every two-center probe, with the single-inclusion data taken
/// from the same probe.  A failing pair records its error and the rest continue.
std::vector<ProbePairRecord> reconstruct_index_map(const MeasurementBundle& bundle, int threads = 1);

/// Steps 1-3 for one pair; `singles` supply step 1 and `pair` steps 2-3.
ProbePairRecord reconstruct_pair(const FarFieldMatrix& background, const FarFieldMatrix& single1,
                                 const FarFieldMatrix& single2, const FarFieldMatrix& pair,
                                 const Vec3& z1, const Vec3& z2, double cap, double kappa);

}  // namespace pairprobe
