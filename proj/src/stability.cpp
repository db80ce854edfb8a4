#include "pairprobe/stability.hpp"

#include <cmath>
#include <sstream>

#include "pairprobe/errors.hpp"
#include "pairprobe/foldy_lax.hpp"
#include "pairprobe/parallel.hpp"
#include "pairprobe/random.hpp"

namespace pairprobe {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::admissible_full: return "admissible-full";
    case Regime::admissible_step1_only: return "admissible-step1-only";
    case Regime::inadmissible: return "inadmissible";
  }
  return "unknown";
}

FarFieldMatrix add_noise(const FarFieldMatrix& m, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw ConfigError("noise: delta must be non-negative");
  FarFieldMatrix out = m;
  if (delta > 0.0)
    out.values += uniform_disk_matrix(static_cast<int>(m.values.rows()),
                                      static_cast<int>(m.values.cols()), delta, seed);
  return out;
}

InclusionLayout shift_layout(const InclusionLayout& layout, double eta, std::uint64_t seed,
                             double t_tilde) {
  if (!(eta >= 0.0)) throw ConfigError("shift: eta must be non-negative");
  std::vector<Probe> moved = layout.probes();
  for (std::size_t m = 0; m < moved.size(); ++m)
    for (std::size_t l = 0; l < moved[m].centers.size(); ++l)
      moved[m].centers[l] += uniform_ball_point(eta, derive_seed(seed, m, l));
  LayoutParams params = layout.params();
  params.t = t_tilde;
  try {
    return InclusionLayout(params, std::move(moved), layout.omega(), layout.policy());
  } catch (const LayoutError& e) {
    throw LayoutError(std::string("shift: shifted layout rejected: ") + e.what());
  }
}

std::vector<ProbePairRecord> noisy_reconstruct(const MeasurementBundle& original,
                                               const MeasurementBundle& shifted,
                                               const NoiseModel& noise, int threads) {
  if (original.probes.size() != shifted.probes.size())
    throw ConfigError("noise: original and shifted bundles differ in probe count");
  const double cap = capacitance(original.params.a, original.params.h);
  const FarFieldMatrix background = add_noise(original.background, noise.delta_v,
                                              derive_seed(noise.seed, 0xb0));
  std::vector<int> pairs;
  for (int m = 0; m < static_cast<int>(original.probes.size()); ++m)
    if (original.probes[m].probe.is_pair()) pairs.push_back(m);
  std::vector<ProbePairRecord> out(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), threads, [&](int k) {
    const int m = pairs[k];
    const ProbeMeasurement& at_z = original.probes[m];
    const ProbeMeasurement& at_shift = shifted.probes[m];
    ProbePairRecord rec;
    const Vec3& z1 = at_shift.probe.centers[0];
    const Vec3& z2 = at_shift.probe.centers[1];
    try {
      if (at_z.singles.size() != 2 || !at_shift.pair)
        throw ConfigError("noise: probe lacks single- or double-inclusion data");
      const auto u1 = add_noise(at_z.singles[0], noise.delta_u, derive_seed(noise.seed, m, 1, 0));
      const auto u2 = add_noise(at_z.singles[1], noise.delta_u, derive_seed(noise.seed, m, 1, 1));
      const auto w = add_noise(*at_shift.pair, noise.delta_w, derive_seed(noise.seed, m, 2));
      rec = reconstruct_pair(background, u1, u2, w, z1, z2, cap, original.kappa);
    } catch (const Error& e) {
      rec = ProbePairRecord{};
      rec.z1 = z1;
      rec.z2 = z2;
      rec.error = e.what();
    }
    rec.probe = m;
    if (at_shift.truth && !at_shift.truth->index.empty()) {
      rec.n_true = at_shift.truth->index[0];
      rec.g_true = at_shift.truth->green;
    }
    if (at_z.truth && !rec.error) {
      const CVector& t = at_z.truth->totals[0];
      rec.total_field_error = std::min((rec.v1.values - t).cwiseAbs().maxCoeff(),
                                       (rec.v1.values + t).cwiseAbs().maxCoeff());
    }
    out[k] = std::move(rec);
  });
  return out;
}

std::vector<ProbePairRecord> noisy_reconstruct(const ForwardModel& model, const InclusionLayout& layout,
                                               const NoiseModel& noise, const ShiftModel& shift,
                                               const SynthesisOptions& synthesis) {
  SynthesisOptions singles = synthesis;
  singles.pairs = false;
  SynthesisOptions pairs = synthesis;
  pairs.singles = false;
  const MeasurementBundle original = synthesize_measurements(model, layout, singles);
  const MeasurementBundle moved = synthesize_measurements(model, shift_layout(layout, shift), pairs);
  return noisy_reconstruct(original, moved, noise, model.threads());
}

Regime regime_check(double h, double t_tilde, double q1, double q2) {
  // Both reconstruction steps need the geometric window on (h, t~).
  if (!(h > 0.0 && h < 1.0 && t_tilde > 0.0 && t_tilde < (1.0 - h) / 2.0)) return Regime::inadmissible;
  if (q1 > 2.0 - 2.0 * h && q2 > 1.0 - h) return Regime::admissible_full;
  if (q1 > 1.0 - h) return Regime::admissible_step1_only;
  return Regime::inadmissible;
}

RateFit convergence_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw FitDomainError("fit: at least 3 points are required");
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [a, e] : points) {
    if (!(a > 0.0) || !(e > 0.0) || !std::isfinite(e)) {
      std::ostringstream os;
      os << "fit: non-positive point (" << a << ", " << e << ")";
      throw FitDomainError(os.str());
    }
    const double x = std::log(a), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw FitDomainError("fit: all abscissae coincide");
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [a, e] : points) {
    const double r = std::log(e) - (fit.intercept + fit.slope * std::log(a));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace pairprobe
