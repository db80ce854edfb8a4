#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pairprobe/types.hpp"

namespace pairprobe {

struct KrylovOptions {
  double tolerance = 1e-8;  ///< on ||b - A x|| / ||b||
  int max_iterations = 500;
  int restart = 30;
};

struct KrylovResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Restarted GMRES(m) with modified Gram-Schmidt and complex Givens rotations.
/// `apply(in, out)` computes out = A in.  `x` holds the initial guess on entry.
/// The returned residual is recomputed from scratch, not taken from the
/// Hessenberg recurrence.
template <class Apply>
KrylovResult gmres(const Apply& apply, const CVector& b, CVector& x, const KrylovOptions& opt) {
  const Eigen::Index n = b.size();
  KrylovResult res;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero(n);
    res.converged = true;
    return res;
  }
  if (x.size() != n) x = CVector::Zero(n);

  const int m = std::max(1, opt.restart);
  CMatrix basis(n, m + 1);
  CMatrix hess = CMatrix::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<cplx> sn(m);
  CVector g(m + 1);
  CVector r(n), w(n);

  auto residual = [&]() {
    apply(x, w);
    r = b - w;
    return r.norm();
  };

  double rnorm = residual();
  res.relative_residual = rnorm / bnorm;
  while (res.relative_residual > opt.tolerance && res.iterations < opt.max_iterations) {
    basis.col(0) = r / rnorm;
    g.setZero();
    g(0) = rnorm;
    hess.setZero();
    int k = 0;
    for (; k < m && res.iterations < opt.max_iterations; ++k) {
      ++res.iterations;
      apply(basis.col(k), w);
      for (int i = 0; i <= k; ++i) {
        hess(i, k) = basis.col(i).dot(w);  // conjugates the first argument
        w -= hess(i, k) * basis.col(i);
      }
      const double wn = w.norm();
      hess(k + 1, k) = wn;
      if (wn > 0.0) basis.col(k + 1) = w / wn;

      for (int i = 0; i < k; ++i) {
        const cplx a = hess(i, k), c = hess(i + 1, k);
        hess(i, k) = cs[i] * a + sn[i] * c;
        hess(i + 1, k) = -std::conj(sn[i]) * a + cs[i] * c;
      }
      const cplx h1 = hess(k, k), h2 = hess(k + 1, k);
      const double rho = std::hypot(std::abs(h1), std::abs(h2));
      if (std::abs(h1) == 0.0) {
        cs[k] = 0.0;
        sn[k] = std::conj(h2) / std::abs(h2);
      } else {
        cs[k] = std::abs(h1) / rho;
        sn[k] = (h1 / std::abs(h1)) * std::conj(h2) / rho;
      }
      hess(k, k) = cs[k] * h1 + sn[k] * h2;
      hess(k + 1, k) = 0.0;
      const cplx gk = g(k);
      g(k) = cs[k] * gk;
      g(k + 1) = -std::conj(sn[k]) * gk;
      if (std::abs(g(k + 1)) / bnorm <= opt.tolerance || wn == 0.0) {
        ++k;
        break;
      }
    }
    // Back substitution on the k x k triangle.
    CVector y = hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    x += basis.leftCols(k) * y;
    rnorm = residual();
    res.relative_residual = rnorm / bnorm;
  }
  res.converged = res.relative_residual <= opt.tolerance;
  return res;
}

}  // namespace pairprobe
