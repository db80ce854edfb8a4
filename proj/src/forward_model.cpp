#include "pairprobe/forward_model.hpp"

#include <cmath>

#include "pairprobe/foldy_lax.hpp"
#include "pairprobe/kernel.hpp"
#include "pairprobe/parallel.hpp"
#include "pairprobe/random.hpp"

namespace pairprobe {

ForwardModel::ForwardModel(MediumSpec medium, WaveConfig waves, SolverOptions options, int threads)
    : waves_(std::move(waves)),
      solver_(std::move(medium), waves_.kappa(), options),
      threads_(std::max(1, threads)) {
  const int n = waves_.size();
  const auto& dirs = waves_.directions();
  solutions_.resize(n);
  parallel_for(n, threads_, [&](int j) { solutions_[j] = solver_.solve_total_field(dirs[j]); });
  background_.kind = FieldKind::background;
  background_.directions = dirs;
  background_.values.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) background_.values(i, j) = solver_.far_field_pattern(solutions_[j], -dirs[i]);
}

CVector ForwardModel::total_fields_at(const Vec3& z) const {
  CVector out(waves_.size());
  for (int j = 0; j < waves_.size(); ++j) out[j] = solver_.evaluate_total_field(solutions_[j], z);
  return out;
}

GreenSample ForwardModel::green(const Vec3& z1, const Vec3& z2, GreenModel model) const {
  const double d = (z2 - z1).norm();
  if (model == GreenModel::surrogate || d < surrogate_threshold()) {
    const double n = medium().index_at(z1);
    return {std::exp(kI * (kappa() * n * d)) / (4.0 * kPi * d), true};
  }
  return {solver_.green_function(z1, z2).value, false};
}

MeasurementBundle synthesize_measurements(const ForwardModel& model, const InclusionLayout& layout,
                                          const SynthesisOptions& options) {
  MeasurementBundle bundle;
  bundle.kappa = model.kappa();
  bundle.directions = model.waves().directions();
  bundle.params = layout.params();
  bundle.background = model.background();

  const double a = layout.a(), h = layout.h();
  const double cap = capacitance(a, h);
  const double radius = residual_magnitude(options.residual_c, a, h);
  const auto& probes = layout.probes();
  bundle.probes.resize(probes.size());

  parallel_for(static_cast<int>(probes.size()), model.threads(), [&](int m) {
    const Probe& probe = probes[m];
    ProbeMeasurement& out = bundle.probes[m];
    out.probe = probe;
    ProbeTruth truth;
    const int count = static_cast<int>(probe.centers.size());
    CMatrix totals(count, model.waves().size());
    for (int l = 0; l < count; ++l) {
      truth.totals.push_back(model.total_fields_at(probe.centers[l]));
      truth.index.push_back(model.medium().index_at(probe.centers[l]));
      totals.row(l) = truth.totals.back().transpose();
    }
    const CMatrix& bg = model.background().values;
    if (options.singles) {
      for (int l = 0; l < count; ++l) {
        FarFieldMatrix u;
        u.kind = FieldKind::single_inclusion;
        u.directions = bundle.directions;
        u.values = foldy_lax_far_field(bg, {cap}, totals.row(l), CMatrix::Zero(1, 1));
        u.values = inject_model_residual(u.values, radius, derive_seed(options.seed, m, 1, l));
        out.singles.push_back(std::move(u));
      }
    }
    if (options.pairs && probe.is_pair()) {
      const GreenSample g = model.green(probe.centers[0], probe.centers[1], options.green_model);
      truth.green = g.value;
      truth.surrogate_used = g.surrogate_used;
      CMatrix greens = CMatrix::Zero(2, 2);
      greens(0, 1) = greens(1, 0) = g.value;
      FarFieldMatrix w;
      w.kind = FieldKind::double_inclusion;
      w.directions = bundle.directions;
      w.values = foldy_lax_far_field(bg, {cap, cap}, totals, greens);
      w.values = inject_model_residual(w.values, radius, derive_seed(options.seed, m, 2));
      out.pair = std::move(w);
    }
    out.truth = std::move(truth);
  });
  return bundle;
}

}  // namespace pairprobe
