#include "pairprobe/foldy_lax.hpp"

#include <cmath>
#include <sstream>

#include "pairprobe/errors.hpp"
#include "pairprobe/random.hpp"

namespace pairprobe {

double capacitance(double a, double h) {
  return -4.0 * kPi * std::pow(a, 1.0 - h) * (1.0 - std::pow(a, h));
}

ScatteringCoefficients solve_scattering_coefficients(const std::vector<double>& caps,
                                                     const CMatrix& totals, const CMatrix& greens) {
  const int m = static_cast<int>(caps.size());
  if (totals.rows() != m || greens.rows() != m || greens.cols() != m)
    throw ConfigError("foldy-lax: dimension mismatch between capacitances, totals and greens");
  ScatteringCoefficients out;
  out.system = CMatrix::Identity(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) out.system(i, j) = caps[i] * greens(i, j);
  CMatrix rhs(m, totals.cols());
  for (int i = 0; i < m; ++i) rhs.row(i) = -caps[i] * totals.row(i);

  Eigen::JacobiSVD<CMatrix> svd(out.system);
  const auto& sv = svd.singularValues();
  out.condition = sv(m - 1) > 0.0 ? sv(0) / sv(m - 1) : INFINITY;
  if (!(out.condition <= 1e12)) {
    std::ostringstream os;
    os << "foldy-lax: system condition number " << out.condition << " exceeds 1e12";
    throw NearSingularSystem(os.str());
  }
  Eigen::PartialPivLU<CMatrix> lu(out.system);
  out.q = lu.solve(rhs);
  CMatrix r = rhs - out.system * out.q;
  // One step of refinement keeps the residual at rounding level for moderate conditioning.
  out.q += lu.solve(r);
  r = rhs - out.system * out.q;
  const double scale = rhs.norm();
  out.relative_residual = scale > 0.0 ? r.norm() / scale : 0.0;
  if (out.relative_residual > 1e-12) {
    std::ostringstream os;
    os << "foldy-lax: relative residual " << out.relative_residual << " above 1e-12";
    throw NumericalError(os.str());
  }
  return out;
}

cplx perturbed_far_field(cplx background, const CVector& totals_minus_xhat, const CVector& q) {
  return background + (totals_minus_xhat.transpose() * q)(0);
}

CMatrix foldy_lax_far_field(const CMatrix& background, const std::vector<double>& caps,
                            const CMatrix& totals, const CMatrix& greens) {
  const auto coeffs = solve_scattering_coefficients(caps, totals, greens);
  return background + totals.transpose() * coeffs.q;
}

CMatrix b_matrix_far_field(const CMatrix& background, const std::vector<double>& caps,
                           const CMatrix& totals, const CMatrix& greens) {
  const int m = static_cast<int>(caps.size());
  CMatrix b = -greens;
  for (int i = 0; i < m; ++i) b(i, i) = -1.0 / caps[i];
  return background + totals.transpose() * b.inverse() * totals;
}

double residual_magnitude(double c, double a, double h) { return c * std::pow(a, 2.0 - h); }

CMatrix inject_model_residual(const CMatrix& m, double magnitude, std::uint64_t seed) {
  if (!(magnitude >= 0.0)) throw ConfigError("foldy-lax: residual magnitude must be non-negative");
  if (magnitude == 0.0) return m;
  return m + uniform_disk_matrix(static_cast<int>(m.rows()), static_cast<int>(m.cols()), magnitude, seed);
}

}  // namespace pairprobe
