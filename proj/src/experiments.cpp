#include "pairprobe/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "pairprobe/errors.hpp"
#include "pairprobe/random.hpp"

namespace pairprobe {
namespace {

std::string cell_id(const char* prefix, double h, double t) {
  std::ostringstream os;
  os << prefix << "_h" << h << "_t" << t;
  return os.str();
}

InclusionLayout pair_layout(const ForwardModel& model, const PairGeometry& g, double a, double h,
                            double t, WindowPolicy policy) {
  LayoutParams p;
  p.a = a;
  p.h = h;
  p.t = t;
  return InclusionLayout(p, make_pairs(g.anchors, g.axes, a, t, g.d_scale), model.medium().support(),
                         policy);
}

ReportRow row_from(const ProbePairRecord& rec) {
  ReportRow row;
  row.probe = rec.probe;
  if (rec.error) {
    row.error = *rec.error;
    return row;
  }
  row.index_error = rec.index_error();
  row.green_error = rec.green_error();
  row.imag_index = rec.index.imag_abs();
  row.l_v = rec.green.l_v;
  if (rec.total_field_error) row.total_field_error = *rec.total_field_error;
  return row;
}

void summarize(SweepSummary& s, const std::vector<ReportRow>& rows) {
  for (double a : s.a_values) {
    std::vector<double> ni, gi, im;
    for (const auto& r : rows) {
      if (r.experiment != s.experiment || r.a != a || !r.error.empty()) continue;
      ni.push_back(r.index_error);
      gi.push_back(r.green_error);
      im.push_back(r.imag_index);
    }
    s.median_index_error.push_back(median(ni));
    s.median_green_error.push_back(median(gi));
    s.median_imag_index.push_back(median(im));
  }
  auto fit = [&](const std::vector<double>& err, RateFit& out, bool& ok) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < err.size(); ++i) pts.emplace_back(s.a_values[i], err[i]);
    try {
      out = convergence_rate(pts);
      ok = true;
    } catch (const FitDomainError&) {
      ok = false;
    }
  };
  fit(s.median_index_error, s.index_fit, s.index_fit_ok);
  fit(s.median_green_error, s.green_fit, s.green_fit_ok);
  // a_values are sorted descending, so "decreasing in a" means the sequence falls.
  s.strictly_decreasing = s.median_index_error.size() >= 2;
  for (std::size_t i = 1; i < s.median_index_error.size(); ++i)
    if (!(s.median_index_error[i] < s.median_index_error[i - 1])) s.strictly_decreasing = false;
}

std::vector<double> sorted_descending(std::vector<double> a) {
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return NAN;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ExperimentReport run_rate_sweep(const ForwardModel& model, const RateSweepSpec& spec) {
  ExperimentReport report;
  const auto a_values = sorted_descending(spec.a_values);
  for (const auto& [h, t] : spec.ht) {
    SweepSummary s;
    s.experiment = cell_id("rate", h, t);
    s.h = h;
    s.t = t;
    s.a_values = a_values;
    s.regime = (h > 0 && h + 2 * t < 1) ? "admissible-full" : "inadmissible";
    for (double a : a_values) {
      const InclusionLayout layout = pair_layout(model, spec.geometry, a, h, t, spec.policy);
      for (std::uint64_t seed : spec.seeds) {
        const auto start = std::chrono::steady_clock::now();
        SynthesisOptions opt;
        opt.green_model = spec.green_model;
        opt.residual_c = spec.residual_c;
        opt.seed = seed;
        const auto records = reconstruct_index_map(synthesize_measurements(model, layout, opt),
                                                   model.threads());
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& rec : records) {
          ReportRow row = row_from(rec);
          row.experiment = s.experiment;
          row.a = a;
          row.h = h;
          row.t = t;
          row.seed = seed;
          row.regime = s.regime;
          row.wall_seconds = wall;
          report.rows.push_back(std::move(row));
        }
      }
    }
    summarize(s, report.rows);
    report.summaries.push_back(std::move(s));
  }
  return report;
}

ExperimentReport run_noise_study(const ForwardModel& model, const NoiseStudySpec& spec) {
  ExperimentReport report;
  const auto a_values = sorted_descending(spec.a_values);
  for (std::size_t r = 0; r < spec.regimes.size(); ++r) {
    const RegimeSpec& reg = spec.regimes[r];
    SweepSummary s;
    {
      std::ostringstream os;
      os << "noise_q1_" << reg.q1 << "_q2_" << reg.q2;
      s.experiment = os.str();
    }
    s.h = spec.h;
    s.t = spec.t;
    s.q1 = reg.q1;
    s.q2 = reg.q2;
    s.a_values = a_values;
    s.regime = std::string(to_string(regime_check(spec.h, spec.t_tilde, reg.q1, reg.q2)));
    for (double a : a_values) {
      const InclusionLayout layout =
          pair_layout(model, spec.geometry, a, spec.h, spec.t, WindowPolicy::allow_outside);
      SynthesisOptions opt;
      opt.green_model = spec.green_model;
      opt.residual_c = spec.residual_c;
      const double delta = std::pow(a, reg.q1);
      const double eta = std::pow(a, reg.q2);
      for (std::uint64_t seed : spec.seeds) {
        const auto start = std::chrono::steady_clock::now();
        opt.seed = derive_seed(seed, 0x5e);
        const NoiseModel noise = NoiseModel::uniform(delta, derive_seed(seed, 0xd0));
        const ShiftModel shift{eta, spec.t_tilde, derive_seed(seed, 0x51)};
        const auto records = noisy_reconstruct(model, layout, noise, shift, opt);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& rec : records) {
          ReportRow row = row_from(rec);
          row.experiment = s.experiment;
          row.a = a;
          row.h = spec.h;
          row.t = spec.t;
          row.q1 = reg.q1;
          row.q2 = reg.q2;
          row.seed = seed;
          row.regime = s.regime;
          row.wall_seconds = wall;
          report.rows.push_back(std::move(row));
        }
      }
    }
    summarize(s, report.rows);
    report.summaries.push_back(std::move(s));
  }
  return report;
}

}  // namespace pairprobe
