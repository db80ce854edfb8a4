#include "pairprobe/inversion.hpp"

#include <cmath>
#include <sstream>

#include "pairprobe/errors.hpp"
#include "pairprobe/foldy_lax.hpp"
#include "pairprobe/parallel.hpp"

namespace pairprobe {

TotalFieldVector extract_total_field_vector(const FarFieldMatrix& u, const FarFieldMatrix& v,
                                            double cap, const Vec3& point) {
  if (u.values.rows() != v.values.rows() || u.values.cols() != v.values.cols())
    throw ConfigError("inversion: U and V matrices differ in shape");
  if (cap == 0.0) throw ConfigError("inversion: capacitance must be non-zero");
  const CMatrix d = (u.values - v.values) / cap;
  const int n = static_cast<int>(d.rows());
  int pivot = 0;
  for (int j = 1; j < n; ++j)
    if (std::abs(d(j, j)) > std::abs(d(pivot, pivot))) pivot = j;
  const double dmax = d.cwiseAbs().maxCoeff();
  if (!(std::abs(d(pivot, pivot)) >= 1e-14 * dmax) || dmax == 0.0)
    throw DegenerateBackscatter("inversion: all backscatter diagonal entries vanish");
  TotalFieldVector out;
  out.point = point;
  out.values.resize(n);
  const cplx vp = std::sqrt(-d(pivot, pivot));
  for (int i = 0; i < n; ++i) out.values[i] = i == pivot ? vp : -d(i, pivot) / vp;
  return out;
}

std::pair<TotalFieldVector, TotalFieldVector> align_signs(const TotalFieldVector& v1,
                                                          const TotalFieldVector& v2) {
  const double plus = (v1.values + v2.values).norm();
  const double minus = (v1.values - v2.values).norm();
  if (std::abs(plus - minus) <= 1e-6 * std::max(plus, minus)) {
    std::ostringstream os;
    os << "inversion: cannot align signs, ||v1+v2|| = " << plus << " vs ||v1-v2|| = " << minus;
    throw AmbiguousAlignment(os.str());
  }
  TotalFieldVector a = v1, b = v2;
  if (plus < minus) b.values = -b.values;
  a.sign_resolved = b.sign_resolved = true;
  return {a, b};
}

GreenEstimate extract_green(const FarFieldMatrix& w, const FarFieldMatrix& v, const CMatrix& fields,
                            double cap, const Vec3& z1, const Vec3& z2) {
  if (fields.rows() != 2 || fields.cols() != w.values.cols())
    throw ConfigError("inversion: field matrix must be 2 x N0");
  const Eigen::Matrix2cd gram = fields * fields.transpose();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(gram);
  GreenEstimate out;
  out.z1 = z1;
  out.z2 = z2;
  out.l_v = svd.singularValues()(1);
  if (!(out.l_v >= 1e-10 * svd.singularValues()(0))) {
    std::ostringstream os;
    os << "inversion: V V^T is ill-conditioned (sigma_min = " << out.l_v << ")";
    throw IllConditionedProbe(os.str());
  }
  const Eigen::Matrix2cd p = gram.inverse();
  const Eigen::Matrix2cd core = fields * (w.values - v.values) * fields.transpose();
  out.matrix = p * core * p / (cap * cap) + Eigen::Matrix2cd::Identity() / cap;
  out.value = out.matrix(0, 1);
  return out;
}

IndexEstimate extract_index(const GreenEstimate& g, double kappa) {
  const double d = (g.z2 - g.z1).norm();
  if (!(d > 0.0)) throw ConfigError("inversion: pair centers coincide");
  IndexEstimate out;
  out.point = g.z1;
  out.value = 4.0 * kPi / (kI * kappa) * g.value - 1.0 / (kI * kappa * d);
  return out;
}

ProbePairRecord reconstruct_pair(const FarFieldMatrix& background, const FarFieldMatrix& single1,
                                 const FarFieldMatrix& single2, const FarFieldMatrix& pair,
                                 const Vec3& z1, const Vec3& z2, double cap, double kappa) {
  ProbePairRecord rec;
  rec.z1 = z1;
  rec.z2 = z2;
  const auto raw1 = extract_total_field_vector(single1, background, cap, z1);
  const auto raw2 = extract_total_field_vector(single2, background, cap, z2);
  std::tie(rec.v1, rec.v2) = align_signs(raw1, raw2);
  CMatrix fields(2, rec.v1.values.size());
  fields.row(0) = rec.v1.values.transpose();
  fields.row(1) = rec.v2.values.transpose();
  rec.green = extract_green(pair, background, fields, cap, z1, z2);
  rec.index = extract_index(rec.green, kappa);
  return rec;
}

std::vector<ProbePairRecord> reconstruct_index_map(const MeasurementBundle& bundle, int threads) {
  std::vector<int> pairs;
  for (int m = 0; m < static_cast<int>(bundle.probes.size()); ++m)
    if (bundle.probes[m].probe.is_pair()) pairs.push_back(m);
  const double cap = capacitance(bundle.params.a, bundle.params.h);
  std::vector<ProbePairRecord> out(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), threads, [&](int k) {
    const int m = pairs[k];
    const ProbeMeasurement& pm = bundle.probes[m];
    const Vec3& z1 = pm.probe.centers[0];
    const Vec3& z2 = pm.probe.centers[1];
    ProbePairRecord rec;
    try {
      if (pm.singles.size() != 2 || !pm.pair)
        throw ConfigError("inversion: probe lacks single- or double-inclusion data");
      rec = reconstruct_pair(bundle.background, pm.singles[0], pm.singles[1], *pm.pair, z1, z2, cap,
                             bundle.kappa);
    } catch (const Error& e) {
      rec = ProbePairRecord{};
      rec.z1 = z1;
      rec.z2 = z2;
      rec.error = e.what();
    }
    rec.probe = m;
    if (pm.truth && !pm.truth->index.empty()) {
      rec.n_true = pm.truth->index[0];
      rec.g_true = pm.truth->green;
      if (!rec.error) {
        const CVector& t = pm.truth->totals[0];
        rec.total_field_error = std::min((rec.v1.values - t).cwiseAbs().maxCoeff(),
                                         (rec.v1.values + t).cwiseAbs().maxCoeff());
      }
    }
    out[k] = std::move(rec);
  });
  return out;
}

}  // namespace pairprobe
