// SPDX-License-Identifier: Apache-2.0
//
// ADMM solver for the unit-diagonal complex SDP
//
//     maximize Re Tr(A V)  s.t.  diag(V) = 1,  V >= 0,
//
// the convex relaxation of max_v v^H A v over unimodular v (V = v v^H with
// the rank constraint dropped). Splitting V = Z puts the affine constraint
// on V and the PSD cone on Z:
//
//     V <- Z - U + A / rho, then diag(V) <- 1
//     Z <- Proj_PSD(V + U)
//     U <- U + V - Z
//
// rho starts at 1 (or at the warm-start value) and is rebalanced when the
// primal and dual residuals drift more than a factor 10 apart. A is scaled to unit Frobenius norm
// before iterating, so `tol` is scale free.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "irssec/error.hpp"
#include "irssec/numkernel.hpp"

namespace irssec {

struct SdpSolution {
  ComplexMatrix v;         // PSD with unit diagonal
  double objective = 0.0;  // Re Tr(A V)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  // sum(y) for a dual-feasible y (Diag(y) - A >= 0): certified upper bound
  // on the SDP optimum and therefore on every unimodular v^H A v.
  double dual_bound = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  // converged through objective stall detection
};

struct SdpResiduals {
  double primal = 0.0;  // ||V - Z||_F
  double dual = 0.0;    // rho ||Z - Z_prev||_F
};

inline SdpResiduals sdp_residuals(const ComplexMatrix& v, const ComplexMatrix& z,
                                  const ComplexMatrix& z_prev, double rho) {
  return {(v - z).norm(), rho * (z - z_prev).norm()};
}

/// ADMM iterate carried between solves of nearby problems. Empty on the
/// first call; filled on return.
struct SdpWarmStart {
  ComplexMatrix z;
  ComplexMatrix u;
  ComplexMatrix basis;  // eigenbasis of the last PSD projection
  double rho = 1.0;

  bool matches(Eigen::Index n) const { return z.rows() == n && u.rows() == n; }
};

struct SdpOptions {
  double tol = 1e-6;
  int max_iters = 20000;
  int stall_window = 100;
  double stall_rel_change = 1e-10;
};

namespace detail {

// D^{-1/2} Z D^{-1/2}: exact unit diagonal, PSD preserved.
inline ComplexMatrix unit_diagonal_scaling(const ComplexMatrix& z) {
  const Eigen::Index n = z.rows();
  RealVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zi = z(i, i).real();
    d(i) = zi > 0.0 ? 1.0 / std::sqrt(zi) : 1.0;
  }
  ComplexMatrix out = hermitize(d.asDiagonal() * z * d.asDiagonal());
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

// y_i = Re (A V)_ii, then shifted until Diag(y) - A is PSD.
inline double dual_upper_bound(const ComplexMatrix& a, const ComplexMatrix& v) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix av = a * v;
  RealVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = av(i, i).real();
  ComplexMatrix slack = -a;
  for (Eigen::Index i = 0; i < n; ++i) slack(i, i) += y(i);
  const double lmin = jacobi_eigensystem(hermitize(slack)).values(n - 1);
  const double shift = std::max(0.0, -lmin);
  return y.sum() + static_cast<double>(n) * shift;
}

}  // namespace detail

inline SdpSolution solve_unit_diag_sdp(const ComplexMatrix& a,
                                       const SdpOptions& opts = {},
                                       SdpWarmStart* warm = nullptr) {
  if (a.rows() != a.cols())
    throw NonHermitianInput("solve_unit_diag_sdp: matrix is not square");
  if (!is_hermitian(a))
    throw NonHermitianInput("solve_unit_diag_sdp: matrix is not Hermitian");
  if (a.rows() > 64) throw TooLarge("solve_unit_diag_sdp: N must be <= 64");
  if (!(opts.tol > 0.0))
    throw PreconditionError("solve_unit_diag_sdp: tol must be > 0");

  const Eigen::Index n = a.rows();
  SdpSolution sol;
  const double scale = a.norm();
  if (scale == 0.0) {
    sol.v = ComplexMatrix::Identity(n, n);
    sol.converged = true;
    return sol;
  }
  const ComplexMatrix an = hermitize(a / scale);

  ComplexMatrix z = ComplexMatrix::Identity(n, n);
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  ComplexMatrix basis;
  double rho = 1.0;
  if (warm && warm->matches(n)) {
    z = warm->z;
    u = warm->u;
    basis = warm->basis;
    rho = warm->rho;
  }
  ComplexMatrix v = z;
  SdpResiduals res{};
  double window_obj = std::numeric_limits<double>::quiet_NaN();

  int it = 0;
  while (it < opts.max_iters) {
    ++it;
    v = z - u + an / rho;
    for (Eigen::Index i = 0; i < n; ++i) v(i, i) = 1.0;
    const ComplexMatrix z_prev = z;
    z = psd_project(hermitize(v + u), basis);
    u += v - z;
    res = sdp_residuals(v, z, z_prev, rho);

    if (res.primal < opts.tol && res.dual < opts.tol) {
      sol.converged = true;
      break;
    }
    if (it % opts.stall_window == 0) {
      const double obj = (an * z).trace().real();
      // Only trusted once the iterates are nearly feasible.
      if (std::max(res.primal, res.dual) < std::sqrt(opts.tol) &&
          std::abs(obj - window_obj) <
              opts.stall_rel_change * std::max(1.0, std::abs(obj))) {
        sol.converged = true;
        sol.stalled = true;
        break;
      }
      window_obj = obj;
    }
    if (res.primal > 10.0 * res.dual) {
      rho *= 2.0;
      u *= 0.5;
    } else if (res.dual > 10.0 * res.primal) {
      rho *= 0.5;
      u *= 2.0;
    }
  }

  if (warm) *warm = {z, u, basis, rho};
  sol.v = detail::unit_diagonal_scaling(z);
  sol.objective = (a * sol.v).trace().real();
  sol.primal_residual = res.primal;
  sol.dual_residual = res.dual;
  sol.dual_bound = detail::dual_upper_bound(an, sol.v) * scale;
  sol.iterations = it;
  return sol;
}

inline SdpSolution solve_unit_diag_sdp(const ComplexMatrix& a, double tol,
                                       int max_iters) {
  SdpOptions o;
  o.tol = tol;
  o.max_iters = max_iters;
  return solve_unit_diag_sdp(a, o);
}

}  // namespace irssec
