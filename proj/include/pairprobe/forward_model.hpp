#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pairprobe/far_field_matrix.hpp"
#include "pairprobe/layout.hpp"
#include "pairprobe/medium_solver.hpp"
#include "pairprobe/waves.hpp"

namespace pairprobe {

enum class GreenModel {
  solver,     ///< medium solver; separations under 4 cells fall back to the surrogate
  surrogate,  ///< e^{i kappa n(z1) d} / (4 pi d) always
};

struct GreenSample {
  cplx value{};
  bool surrogate_used = false;
};

/// Unperturbed-medium quantities needed for synthesis and for ground truth:
/// the plane-wave solutions for every incidence direction are solved once.
class ForwardModel {
 public:
  ForwardModel(MediumSpec medium, WaveConfig waves, SolverOptions options = {}, int threads = 1);

  const MediumSolver& solver() const { return solver_; }
  const WaveConfig& waves() const { return waves_; }
  const MediumSpec& medium() const { return solver_.medium(); }
  double kappa() const { return waves_.kappa(); }
  int threads() const { return threads_; }

  /// V^inf(-theta_i, theta_j).
  const FarFieldMatrix& background() const { return background_; }
  /// V^t(z, theta_j) for every direction.
  CVector total_fields_at(const Vec3& z) const;
  GreenSample green(const Vec3& z1, const Vec3& z2, GreenModel model) const;
  /// The separation below which the solver model uses the surrogate.
  double surrogate_threshold() const { return 4.0 * solver_.grid().cell_size(); }

  const std::vector<FieldSolution>& plane_wave_solutions() const { return solutions_; }

 private:
  WaveConfig waves_;
  MediumSolver solver_;
  int threads_;
  std::vector<FieldSolution> solutions_;
  FarFieldMatrix background_;
};

/// Exact values behind one probe's data; absent for externally loaded data.
struct ProbeTruth {
  std::vector<CVector> totals;   ///< V^t(z^l, theta_j) per center
  std::vector<double> index;     ///< n(z^l) per center
  cplx green{};                  ///< G(z^1, z^2) used in synthesis (pairs only)
  bool surrogate_used = false;
};

struct ProbeMeasurement {
  Probe probe;
  std::vector<FarFieldMatrix> singles;  ///< U^inf, one per center
  std::optional<FarFieldMatrix> pair;   ///< W^inf for two-center probes
  std::optional<ProbeTruth> truth;
};

struct MeasurementBundle {
  double kappa = 1.0;
  std::vector<Vec3> directions;
  LayoutParams params;
  FarFieldMatrix background;
  std::vector<ProbeMeasurement> probes;
};

struct SynthesisOptions {
  GreenModel green_model = GreenModel::solver;
  double residual_c = 0.0;  ///< injected residual radius is residual_c * a^{2-h}
  std::uint64_t seed = 0;
  bool singles = true;      ///< synthesize U^inf for every center
  bool pairs = true;        ///< synthesize W^inf for every two-center probe
};

/// Fills V^inf, U^inf and W^inf from the exact Foldy-Lax system.
MeasurementBundle synthesize_measurements(const ForwardModel& model, const InclusionLayout& layout,
                                          const SynthesisOptions& options = {});

}  // namespace pairprobe
