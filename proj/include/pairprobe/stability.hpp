#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "pairprobe/far_field_matrix.hpp"
#include "pairprobe/forward_model.hpp"
#include "pairprobe/inversion.hpp"
#include "pairprobe/layout.hpp"

namespace pairprobe {

/// Additive noise amplitudes for V^inf, U^inf and W^inf.
struct NoiseModel {
  double delta_v = 0.0;
  double delta_u = 0.0;
  double delta_w = 0.0;
  std::uint64_t seed = 0;

  static NoiseModel uniform(double delta, std::uint64_t seed) { return {delta, delta, delta, seed}; }
};

/// Probe displacement between the single- and double-inclusion measurements.
struct ShiftModel {
  double eta = 0.0;      ///< maximum displacement of any center
  double t_tilde = 0.0;  ///< closeness exponent the shifted pairs must satisfy
  std::uint64_t seed = 0;
};

/// Exponents with delta = a^{q1} and eta = a^{q2}.
struct RegimeSpec {
  double q1 = 0.0;
  double q2 = 0.0;
};

enum class Regime { admissible_full, admissible_step1_only, inadmissible };

std::string_view to_string(Regime r);

/// Entries perturbed by independent uniform-disk draws of radius delta.
FarFieldMatrix add_noise(const FarFieldMatrix& m, double delta, std::uint64_t seed);

/// Every center moves by an independent uniform vector in the ball of radius eta;
/// the result is re-validated with closeness exponent t_tilde.
InclusionLayout shift_layout(const InclusionLayout& layout, double eta, std::uint64_t seed,
                             double t_tilde);
inline InclusionLayout shift_layout(const InclusionLayout& layout, const ShiftModel& shift) {
  return shift_layout(layout, shift.eta, shift.seed, shift.t_tilde);
}

/// Step 1 on noisy single-inclusion data at the original centers, steps 2-3 on
/// noisy double-inclusion data at the shifted centers.  Ground truth refers to
/// the shifted centers.
std::vector<ProbePairRecord> noisy_reconstruct(const ForwardModel& model, const InclusionLayout& layout,
                                               const NoiseModel& noise, const ShiftModel& shift,
                                               const SynthesisOptions& synthesis = {});

/// Same as above, from bundles already synthesized at the original and shifted centers.
std::vector<ProbePairRecord> noisy_reconstruct(const MeasurementBundle& original,
                                               const MeasurementBundle& shifted,
                                               const NoiseModel& noise, int threads = 1);

Regime regime_check(double h, double t_tilde, double q1, double q2);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS of the log-log fit residuals
};

/// Least-squares line through (log a, log error).
RateFit convergence_rate(const std::vector<std::pair<double, double>>& points);

}  // namespace pairprobe
