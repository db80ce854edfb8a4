#pragma once

#include <cstdint>
#include <vector>

#include "pairprobe/types.hpp"

namespace pairprobe {

/// C = -4 pi a^{1-h} (1 - a^h): capacitance of a small impedance ball with beta = 1.
double capacitance(double a, double h);

/// Scattering strengths of M point-like inclusions for one or more incidences.
struct ScatteringCoefficients {
  CMatrix q;       ///< M x K; column k belongs to the k-th right-hand side
  CMatrix system;  ///< I + diag(C) G~, with G~ the zero-diagonal Green matrix
  double relative_residual = 0.0;
  double condition = 1.0;
};

/// Solves Q_m + sum_{j != m} C_m G(z_m, z_j) Q_j = -C_m V^t(z_m, theta) for every column of
/// `totals` (M x K).  Only the off-diagonal part of `greens` is read.
/// Throws NearSingularSystem when cond > 1e12.
ScatteringCoefficients solve_scattering_coefficients(const std::vector<double>& caps,
                                                     const CMatrix& totals, const CMatrix& greens);

/// V^inf(xhat, theta) + sum_m V^t(z_m, -xhat) Q_m.
cplx perturbed_far_field(cplx background, const CVector& totals_minus_xhat, const CVector& q);

/// Foldy-Lax data matrix V^inf + T^T Q for backscatter data: T is M x N0 with
/// T(m, j) = V^t(z_m, theta_j), so row i of the perturbation pairs with xhat = -theta_i.
CMatrix foldy_lax_far_field(const CMatrix& background, const std::vector<double>& caps,
                            const CMatrix& totals, const CMatrix& greens);

/// The same matrix assembled as V^inf + T^T B^{-1} T with B = -diag(C)^{-1} - G~.
CMatrix b_matrix_far_field(const CMatrix& background, const std::vector<double>& caps,
                           const CMatrix& totals, const CMatrix& greens);

/// c a^{2-h}: magnitude of the neglected higher-order terms.
double residual_magnitude(double c, double a, double h);

/// Adds independent uniform-disk perturbations of the given radius to every entry.
CMatrix inject_model_residual(const CMatrix& m, double magnitude, std::uint64_t seed);

}  // namespace pairprobe
