// SPDX-License-Identifier: Apache-2.0
//
// IRS phase design: maximize v^H A v over unimodular v = e^{j theta}.
//
// A = B^H (alpha_r h_r h_r^H - 2^R alpha_e h_e h_e^H) B with B = diag(b) in
// the rank-one case and B = diag(G^H w) in the full-rank case. Solvers:
//   - pgd_phase:         gradient descent on the real phase vector with an
//                        Armijo backtracking line search;
//   - sdp_round:         Gaussian randomization of an SDP relaxation solution;
//   - stat_eve_phase:    closed-form alignment with the legitimate channel;
//   - brute_force_phase: exhaustive grid search, the reference for N <= 4.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "irssec/beamform.hpp"
#include "irssec/error.hpp"
#include "irssec/numkernel.hpp"
#include "irssec/phase_vector.hpp"

namespace irssec {

struct PhaseProblem {
  ComplexMatrix a;  // Hermitian N x N

  Eigen::Index size() const { return a.rows(); }
};

struct PhaseSolveReport {
  double objective = 0.0;  // v^H A v
  int iterations = 0;
  std::optional<double> sdp_upper_bound;
  bool converged = false;
  std::vector<double> history;  // objective after each accepted PGD step
};

struct PhaseSolution {
  PhaseVector phases;
  PhaseSolveReport report;
};

inline PhaseProblem build_phase_problem(const ComplexVector& b_diag_source,
                                        const ComplexVector& h_r,
                                        const ComplexVector& h_e,
                                        double alpha_r, double alpha_e,
                                        double rate_r) {
  const Eigen::Index n = b_diag_source.size();
  if (h_r.size() != n || h_e.size() != n)
    throw DimensionMismatch("build_phase_problem: length mismatch");
  const ComplexMatrix s = secrecy_matrix(h_r, h_e, alpha_r, alpha_e, rate_r);
  const auto bd = b_diag_source.asDiagonal();
  return {hermitize(b_diag_source.conjugate().asDiagonal() * s * bd)};
}

inline double quadratic_value(const ComplexMatrix& a, const ComplexVector& v) {
  return v.dot(a * v).real();
}

/// v^H A v for v = e^{j theta}.
inline double phase_objective(const PhaseProblem& prob,
                              const PhaseVector& theta) {
  if (theta.size() != prob.size())
    throw DimensionMismatch("phase_objective: length mismatch");
  return quadratic_value(prob.a, theta.unimodular());
}

namespace detail {

inline RealVector gradient_at(const ComplexMatrix& a, const ComplexVector& v) {
  const ComplexVector av = a * v;
  RealVector g(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    g(i) = -2.0 * (std::conj(v(i)) * av(i)).imag();
  return g;
}

inline ComplexVector unimodular_of(const RealVector& theta) {
  ComplexVector v(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) v(i) = std::polar(1.0, theta(i));
  return v;
}

}  // namespace detail

/// d(-v^H A v)/d theta_i = -2 Im(e^{-j theta_i} (A v)_i).
inline RealVector phase_gradient(const PhaseProblem& prob,
                                 const PhaseVector& theta) {
  if (theta.size() != prob.size())
    throw DimensionMismatch("phase_gradient: length mismatch");
  return detail::gradient_at(prob.a, theta.unimodular());
}

struct PgdOptions {
  double eps = 1e-4;
  int max_iters = 5000;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  int max_halvings = 50;
};

/// Minimizes -v^H A v by gradient steps on theta. A is scaled to unit
/// Frobenius norm internally, so `eps` bounds the gradient of the normalized
/// problem and is independent of the channel scale.
inline PhaseSolution pgd_phase(const PhaseProblem& prob,
                               const PhaseVector& init,
                               const PgdOptions& opts) {
  if (!(opts.eps > 0.0)) throw PreconditionError("pgd_phase: eps must be > 0");
  if (init.size() != prob.size())
    throw DimensionMismatch("pgd_phase: init length mismatch");
  PhaseSolution out;
  const double scale = prob.a.norm();
  RealVector theta = init.as_real();
  if (scale == 0.0) {
    out.phases = init;
    out.report.converged = true;
    return out;
  }
  const ComplexMatrix an = prob.a / scale;

  ComplexVector v = detail::unimodular_of(theta);
  ComplexVector av = an * v;
  double f = -v.dot(av).real();
  out.report.history.push_back(-f * scale);
  int accepted = 0;
  bool converged = false;
  RealVector g(theta.size());
  while (accepted < opts.max_iters) {
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      g(i) = -2.0 * (std::conj(v(i)) * av(i)).imag();
    const double gnorm2 = g.squaredNorm();
    if (std::sqrt(gnorm2) < opts.eps) {
      converged = true;
      break;
    }
    double mu = opts.initial_step;
    bool stepped = false;
    for (int h = 0; h <= opts.max_halvings; ++h, mu *= opts.shrink) {
      const RealVector trial = theta - mu * g;
      const ComplexVector vt = detail::unimodular_of(trial);
      const ComplexVector avt = an * vt;
      const double ft = -vt.dot(avt).real();
      if (ft <= f - opts.armijo_c * mu * gnorm2) {
        theta = trial;
        v = vt;
        av = avt;
        f = ft;
        stepped = true;
        break;
      }
    }
    if (!stepped) break;  // no sufficient decrease at any step length
    ++accepted;
    out.report.history.push_back(-f * scale);
  }
  out.phases = PhaseVector(theta);
  out.report.objective = phase_objective(prob, out.phases);
  out.report.iterations = accepted;
  out.report.converged = converged;
  return out;
}

/// Best of PGD runs from `warm_start` (if given) and `restarts` uniform
/// random initializations in [-pi, pi). Iteration counts are summed.
inline PhaseSolution pgd_phase_restarts(const PhaseProblem& prob, int restarts,
                                        const PgdOptions& opts, Rng& rng,
                                        const std::optional<PhaseVector>&
                                            warm_start = std::nullopt) {
  std::vector<PhaseVector> inits;
  if (warm_start) inits.push_back(*warm_start);
  for (int k = 0; k < restarts; ++k)
    inits.push_back(PhaseVector::random(prob.size(), rng));
  if (inits.empty()) inits.push_back(PhaseVector::random(prob.size(), rng));

  std::optional<PhaseSolution> best;
  int total_iters = 0;
  bool all_converged = true;
  for (const auto& init : inits) {
    PhaseSolution s = pgd_phase(prob, init, opts);
    total_iters += s.report.iterations;
    all_converged = all_converged && s.report.converged;
    if (!best || s.report.objective > best->report.objective)
      best = std::move(s);
  }
  best->report.iterations = total_iters;
  best->report.converged = all_converged;
  return *best;
}

/// Gaussian randomization: candidates e^{j Arg(U Sigma^{1/2} r)}, r ~ CN(0, I),
/// plus the leading-eigenvector candidate (index 0). Highest v^H A v wins,
/// lowest index on ties.
inline PhaseSolution sdp_round(const ComplexMatrix& v_star,
                               const PhaseProblem& prob, int n_draws,
                               Rng& rng) {
  const Eigen::Index n = prob.size();
  if (v_star.rows() != n || v_star.cols() != n)
    throw DimensionMismatch("sdp_round: V* size mismatch");
  if (n_draws < 0) throw PreconditionError("sdp_round: negative draw count");
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(v_star(i, i) - 1.0) > 1e-6)
      throw PreconditionError("sdp_round: V* must have unit diagonal");
  const Eigensystem es = jacobi_eigensystem(v_star);
  if (es.values(n - 1) < -1e-6)
    throw PreconditionError("sdp_round: V* is not positive semidefinite");

  // Eigenvalues at rounding level are treated as zero (numerical rank).
  const double floor = 1e-12 * std::max(es.values(0), 0.0) * static_cast<double>(n);
  RealVector root(n);
  for (Eigen::Index i = 0; i < n; ++i)
    root(i) = es.values(i) > floor ? std::sqrt(es.values(i)) : 0.0;
  const ComplexMatrix factor = es.vectors * root.asDiagonal();

  PhaseSolution out;
  out.phases = PhaseVector::from_arg(es.vectors.col(0));
  out.report.objective = phase_objective(prob, out.phases);
  for (int k = 0; k < n_draws; ++k) {
    const ComplexVector r = sample_cn(n, 1.0, rng);
    PhaseVector cand = PhaseVector::from_arg(factor * r);
    const double obj = phase_objective(prob, cand);
    if (obj > out.report.objective) {
      out.phases = std::move(cand);
      out.report.objective = obj;
    }
  }
  out.report.iterations = n_draws + 1;
  out.report.sdp_upper_bound = (prob.a * v_star).trace().real();
  out.report.converged = true;
  return out;
}

/// theta_n = -Arg(conj(h_r,n) b_n): every term of h_r^H Theta b becomes
/// real positive, so |h_r^H Theta b| = sum_n |h_r,n| |b_n|.
inline PhaseVector stat_eve_phase(const ComplexVector& h_r,
                                  const ComplexVector& b) {
  if (h_r.size() != b.size())
    throw DimensionMismatch("stat_eve_phase: length mismatch");
  std::vector<double> t(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.size(); ++i)
    t[static_cast<std::size_t>(i)] = -std::arg(std::conj(h_r(i)) * b(i));
  return PhaseVector(std::move(t));
}

struct BruteForceResult {
  PhaseVector phases;
  double objective = 0.0;
};

/// Exhaustive search over theta_1 = 0 and theta_n in {2 pi k / L}; with
/// `polish`, the grid winner is refined by PGD and kept if it improves.
inline BruteForceResult brute_force_phase(const PhaseProblem& prob,
                                          int grid_levels,
                                          bool polish = false) {
  const Eigen::Index n = prob.size();
  if (n > 4) throw TooLarge("brute_force_phase: N must be <= 4");
  if (n < 1) throw PreconditionError("brute_force_phase: empty problem");
  if (grid_levels < 1 || grid_levels > 128)
    throw PreconditionError("brute_force_phase: grid_levels must be in [1, 128]");

  std::vector<cdouble> roots(static_cast<std::size_t>(grid_levels));
  for (int k = 0; k < grid_levels; ++k)
    roots[static_cast<std::size_t>(k)] = std::polar(1.0, kTwoPi * k / grid_levels);

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  ComplexVector v(n);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_idx = idx;
  for (;;) {
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = roots[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    const double obj = quadratic_value(prob.a, v);
    if (obj > best) {
      best = obj;
      best_idx = idx;
    }
    Eigen::Index pos = 1;  // theta_1 stays at 0
    while (pos < n && ++idx[static_cast<std::size_t>(pos)] == grid_levels) {
      idx[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos >= n) break;
  }

  std::vector<double> theta(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    theta[static_cast<std::size_t>(i)] =
        kTwoPi * best_idx[static_cast<std::size_t>(i)] / grid_levels;
  BruteForceResult out{PhaseVector(std::move(theta)), best};
  if (polish) {
    PgdOptions po;
    po.eps = 1e-10;
    po.max_iters = 20000;
    const PhaseSolution refined = pgd_phase(prob, out.phases, po);
    if (refined.report.objective > out.objective) {
      out.phases = refined.phases;
      out.objective = refined.report.objective;
    }
  }
  return out;
}

}  // namespace irssec
