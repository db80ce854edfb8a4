#pragma once

#include <memory>

#include "pairprobe/convolution.hpp"
#include "pairprobe/gmres.hpp"
#include "pairprobe/medium.hpp"
#include "pairprobe/types.hpp"
#include "pairprobe/volume_grid.hpp"

namespace pairprobe {

struct SolverOptions {
  int cells_per_axis = 24;
  int subsamples = 4;
  KrylovOptions krylov{};
};

/// Cell values of a total field together with what drove it.
struct FieldSolution {
  enum class Source { plane_wave, point_source };
  Source source = Source::plane_wave;
  Vec3 origin = Vec3::Zero();  ///< incidence direction, or source point
  CVector values;              ///< per-cell total field
  double residual = 0.0;       ///< relative residual achieved
  int iterations = 0;
};

struct GreenValue {
  cplx value{};
  bool near_singular = false;  ///< |x - z| below the near-singularity floor
};

/// Lippmann-Schwinger solver for the unperturbed medium,
///   u(x) = u_inc(x) + kappa^2 int (n^2 - 1)(y) Phi(x, y) u(y) dy,
/// collocated at cell midpoints.  Every cell is treated as the ball of equal
/// volume, so the self term and any near-field evaluation use the exact
/// ball integral of Phi.  The discrete operator is complex-symmetric, which
/// makes the discrete far-field, mixed and Green reciprocities hold to
/// solver tolerance.
///
/// Immutable after construction; every method is reentrant.
class MediumSolver {
 public:
  MediumSolver(MediumSpec medium, double kappa, SolverOptions options = {});

  const MediumSpec& medium() const { return medium_; }
  double kappa() const { return kappa_; }
  const VolumeGrid& grid() const { return grid_; }
  const SolverOptions& options() const { return options_; }
  /// Separation below which green_function() flags its result (1e-3 wavelengths).
  double near_singularity_floor() const;

  FieldSolution solve_total_field(const Vec3& theta) const;
  /// Total field of the point source Phi(., z); its cell values are G(y_j, z).
  FieldSolution solve_point_source(const Vec3& z) const;

  /// Incident part plus the integral representation evaluated at x.
  cplx evaluate_total_field(const FieldSolution& sol, const Vec3& x) const;
  /// Scattered far-field pattern kappa^2 int e^{-i kappa xhat.y} (n^2 - 1) u dy.
  cplx far_field_pattern(const FieldSolution& sol, const Vec3& xhat) const;

  GreenValue green_function(const Vec3& z, const Vec3& x) const;
  GreenValue green_function(const FieldSolution& source, const Vec3& x) const;
  cplx green_far_field(const Vec3& z, const Vec3& xhat) const;
  cplx green_far_field(const FieldSolution& source, const Vec3& xhat) const;

 private:
  FieldSolution solve(FieldSolution::Source source, const Vec3& origin, CVector incident) const;
  cplx incident_at(const FieldSolution& sol, const Vec3& x) const;
  cplx scattered_at(const FieldSolution& sol, const Vec3& x) const;

  MediumSpec medium_;
  double kappa_;
  SolverOptions options_;
  VolumeGrid grid_;
  std::unique_ptr<ToeplitzConvolver> convolver_;
};

}  // namespace pairprobe
