#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pairprobe/forward_model.hpp"
#include "pairprobe/stability.hpp"

namespace pairprobe {

/// Pair geometry shared by the sweeps: pair m starts at anchors[m] and extends
/// d_scale * a^t along axes[m].
struct PairGeometry {
  std::vector<Vec3> anchors;
  std::vector<Vec3> axes;
  double d_scale = 1.0;
};

struct RateSweepSpec {
  std::vector<double> a_values;
  std::vector<std::pair<double, double>> ht;  ///< (h, t) cells
  std::vector<std::uint64_t> seeds{0};
  PairGeometry geometry;
  double residual_c = 0.0;
  GreenModel green_model = GreenModel::surrogate;
  WindowPolicy policy = WindowPolicy::allow_outside;
};

struct NoiseStudySpec {
  std::vector<double> a_values;
  double h = 0.2;
  double t = 0.2;
  double t_tilde = 0.2;
  std::vector<RegimeSpec> regimes;
  std::vector<std::uint64_t> seeds{0};
  PairGeometry geometry;
  double residual_c = 0.0;
  GreenModel green_model = GreenModel::surrogate;
};

/// One reconstructed pair of one sweep cell.
struct ReportRow {
  std::string experiment;
  double a = 0.0, h = 0.0, t = 0.0;
  double q1 = NAN, q2 = NAN;
  std::uint64_t seed = 0;
  int probe = 0;
  double index_error = NAN;
  double green_error = NAN;
  double imag_index = NAN;
  double total_field_error = NAN;
  double l_v = NAN;
  std::string regime;
  std::string error;
  double wall_seconds = 0.0;
};

/// Medians over seeds and pairs at each a, with log-log fits.
struct SweepSummary {
  std::string experiment;
  double h = 0.0, t = 0.0;
  double q1 = NAN, q2 = NAN;
  std::string regime;
  std::vector<double> a_values;
  std::vector<double> median_index_error;
  std::vector<double> median_green_error;
  std::vector<double> median_imag_index;
  RateFit index_fit;
  RateFit green_fit;
  bool index_fit_ok = false;
  bool green_fit_ok = false;
  bool strictly_decreasing = false;  ///< median index error, largest a to smallest
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<SweepSummary> summaries;
};

ExperimentReport run_rate_sweep(const ForwardModel& model, const RateSweepSpec& spec);
ExperimentReport run_noise_study(const ForwardModel& model, const NoiseStudySpec& spec);

double median(std::vector<double> values);

}  // namespace pairprobe
