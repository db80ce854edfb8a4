#include "pairprobe/medium_solver.hpp"

#include <cmath>
#include <sstream>

#include "pairprobe/errors.hpp"
#include "pairprobe/kernel.hpp"

namespace pairprobe {

MediumSolver::MediumSolver(MediumSpec medium, double kappa, SolverOptions options)
    : medium_(std::move(medium)),
      kappa_(kappa),
      options_(options),
      grid_(medium_, options.cells_per_axis, options.subsamples) {
  if (!(kappa_ > 0.0)) throw ConfigError("solver: kappa must be positive");
  const double wavelength = 2.0 * kPi / (kappa_ * medium_.n_max());
  if (grid_.cell_size() > wavelength / 8.0) {
    std::ostringstream os;
    os << "solver: cell size " << grid_.cell_size() << " exceeds wavelength/8 = " << wavelength / 8.0;
    throw ConfigError(os.str());
  }
  if (!grid_.zero_contrast()) {
    const double h = grid_.cell_size();
    const double r_eq = grid_.equivalent_radius();
    const double k = kappa_;
    convolver_ = std::make_unique<ToeplitzConvolver>(grid_.dims(), [h, r_eq, k](int i, int j, int l) {
      const double rho = h * std::sqrt(static_cast<double>(i * i + j * j + l * l));
      return ball_integrated_kernel(k, r_eq, rho);
    });
  }
}

double MediumSolver::near_singularity_floor() const { return 1e-3 * 2.0 * kPi / kappa_; }

FieldSolution MediumSolver::solve(FieldSolution::Source source, const Vec3& origin,
                                  CVector incident) const {
  FieldSolution sol;
  sol.source = source;
  sol.origin = origin;
  if (grid_.zero_contrast()) {
    sol.values = std::move(incident);
    return sol;
  }
  const int n = grid_.cell_count();
  const auto& q = grid_.contrast();
  const double k2 = kappa_ * kappa_;
  auto apply = [&](const CVector& in, CVector& out) {
    CVector weighted(n);
    for (int i = 0; i < n; ++i) weighted[i] = q[i] * in[i];
    out.resize(n);
    convolver_->apply(std::span<const cplx>(weighted.data(), n), std::span<cplx>(out.data(), n));
    out = in - k2 * out;
  };
  CVector x = incident;
  const KrylovResult kr = gmres(apply, incident, x, options_.krylov);
  if (!kr.converged) {
    std::ostringstream os;
    os << "solver: GMRES stalled at relative residual " << kr.relative_residual << " after "
       << kr.iterations << " iterations";
    throw SolverFailure(os.str(), kr.relative_residual, kr.iterations);
  }
  sol.values = std::move(x);
  sol.residual = kr.relative_residual;
  sol.iterations = kr.iterations;
  return sol;
}

FieldSolution MediumSolver::solve_total_field(const Vec3& theta) const {
  const int n = grid_.cell_count();
  CVector inc(n);
  for (int i = 0; i < n; ++i) inc[i] = std::exp(kI * (kappa_ * grid_.center(i).dot(theta)));
  return solve(FieldSolution::Source::plane_wave, theta, std::move(inc));
}

FieldSolution MediumSolver::solve_point_source(const Vec3& z) const {
  const int n = grid_.cell_count();
  CVector inc(n);
  const double r_eq = grid_.equivalent_radius();
  const double vol = grid_.cell_volume();
  // Cell averages keep the 1/|y - z| singularity integrable on the lattice.
  for (int i = 0; i < n; ++i)
    inc[i] = ball_integrated_kernel(kappa_, r_eq, (grid_.center(i) - z).norm()) / vol;
  return solve(FieldSolution::Source::point_source, z, std::move(inc));
}

cplx MediumSolver::incident_at(const FieldSolution& sol, const Vec3& x) const {
  if (sol.source == FieldSolution::Source::plane_wave)
    return std::exp(kI * (kappa_ * x.dot(sol.origin)));
  return helmholtz_kernel(kappa_, (x - sol.origin).norm());
}

cplx MediumSolver::scattered_at(const FieldSolution& sol, const Vec3& x) const {
  const auto& q = grid_.contrast();
  const double r_eq = grid_.equivalent_radius();
  cplx acc = 0.0;
  for (int j : grid_.active_cells())
    acc += ball_integrated_kernel(kappa_, r_eq, (x - grid_.center(j)).norm()) * (q[j] * sol.values[j]);
  return kappa_ * kappa_ * acc;
}

cplx MediumSolver::evaluate_total_field(const FieldSolution& sol, const Vec3& x) const {
  return incident_at(sol, x) + scattered_at(sol, x);
}

cplx MediumSolver::far_field_pattern(const FieldSolution& sol, const Vec3& xhat) const {
  const auto& q = grid_.contrast();
  cplx acc = 0.0;
  for (int j : grid_.active_cells())
    acc += std::exp(-kI * (kappa_ * xhat.dot(grid_.center(j)))) * (q[j] * sol.values[j]);
  return kappa_ * kappa_ * grid_.cell_volume() * acc;
}

GreenValue MediumSolver::green_function(const Vec3& z, const Vec3& x) const {
  if ((x - z).norm() == 0.0) throw NumericalError("green_function: x coincides with the source");
  if (grid_.zero_contrast())
    return {helmholtz_kernel(kappa_, (x - z).norm()), (x - z).norm() < near_singularity_floor()};
  return green_function(solve_point_source(z), x);
}

GreenValue MediumSolver::green_function(const FieldSolution& source, const Vec3& x) const {
  const double d = (x - source.origin).norm();
  if (d == 0.0) throw NumericalError("green_function: x coincides with the source");
  return {evaluate_total_field(source, x), d < near_singularity_floor()};
}

cplx MediumSolver::green_far_field(const Vec3& z, const Vec3& xhat) const {
  if (grid_.zero_contrast()) return std::exp(-kI * (kappa_ * xhat.dot(z)));
  return green_far_field(solve_point_source(z), xhat);
}

cplx MediumSolver::green_far_field(const FieldSolution& source, const Vec3& xhat) const {
  return std::exp(-kI * (kappa_ * xhat.dot(source.origin))) + far_field_pattern(source, xhat);
}

}  // namespace pairprobe
