// SPDX-License-Identifier: Apache-2.0
//
// End-to-end minimum-power secure designs (w, Theta, P).
//
//   solve_rank_one   G = a b^H: w = a/||a|| decouples from the phases, which
//                    come from SDP+rounding or PGD on A = B^H S B.
//   solve_full_rank  alternates the principal-eigenvector beamformer with a
//                    phase solve on A' = B'^H S B', B' = diag(G^H w), starting
//                    from Theta = I, until the power settles; then a
//                    direct gradient ascent on lambda*(Theta) finishes the
//                    phases.
//   solve_stat_eve   eavesdropper known only in distribution: phases align
//                    with the legitimate channel, power from the rate
//                    equation with the closed-form F1 eavesdropper term.
//   solve_stat_both  both links statistical: phases are irrelevant, power
//                    from F1(x_r P) - F1(x_e P) = R.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "irssec/beamform.hpp"
#include "irssec/channel.hpp"
#include "irssec/phaseopt.hpp"
#include "irssec/scenario.hpp"
#include "irssec/sdpsolver.hpp"
#include "irssec/secrecy.hpp"

namespace irssec {

enum class DesignMethod {
  RankOneSDP,
  RankOnePGD,
  FullRankAlternating,
  StatEveClosedForm,
  StatBothClosedForm
};

inline const char* to_string(DesignMethod m) {
  switch (m) {
    case DesignMethod::RankOneSDP: return "RankOneSDP";
    case DesignMethod::RankOnePGD: return "RankOnePGD";
    case DesignMethod::FullRankAlternating: return "FullRankAlternating";
    case DesignMethod::StatEveClosedForm: return "StatEveClosedForm";
    case DesignMethod::StatBothClosedForm: return "StatBothClosedForm";
  }
  return "unknown";
}

struct DesignOptions {
  PhaseSolver solver = PhaseSolver::Sdp;
  SolverSettings settings;
  std::uint64_t seed = 1;
};

struct DesignResult {
  ComplexVector omega;
  PhaseVector phases;
  std::optional<double> power_w;  // nullopt: target rate unreachable
  double achieved_rate_bits = 0.0;
  DesignMethod method = DesignMethod::RankOneSDP;
  PhaseSolveReport report;
  int outer_iterations = 0;
  std::vector<double> power_history;  // accepted outer iterates (full rank)

  bool feasible() const { return power_w.has_value(); }
};

namespace detail {

inline PgdOptions pgd_options(const SolverSettings& s) {
  PgdOptions o;
  o.eps = s.pgd_eps;
  o.max_iters = s.pgd_max_iters;
  return o;
}

// Ascent from the selected point until |grad| < eps |v^H A v|, so the
// objective (and with it the power) is accurate relative to its own size
// rather than to ||A||_F. Kept only if it improves.
inline void refine_phase(const PhaseProblem& prob, const SolverSettings& s,
                         PhaseSolution& sol) {
  const double scale = prob.a.norm();
  const double obj = std::abs(sol.report.objective);
  if (scale == 0.0 || obj == 0.0) return;
  PgdOptions o = pgd_options(s);
  o.eps = s.pgd_eps * std::max(obj / scale, 1e-12);
  PhaseSolution r = pgd_phase(prob, sol.phases, o);
  sol.report.iterations += r.report.iterations;
  if (r.report.objective > sol.report.objective) {
    sol.phases = std::move(r.phases);
    sol.report.objective = r.report.objective;
  }
}

// One phase solve with the configured method. A warm start, when given, is
// kept if the solver does not beat it. `random_starts` = false limits PGD to
// the warm start; `sdp_state` carries the ADMM iterate between calls.
inline PhaseSolution solve_phase(const PhaseProblem& prob,
                                 const DesignOptions& opts, Rng& rng,
                                 const std::optional<PhaseVector>& warm,
                                 SdpWarmStart* sdp_state = nullptr,
                                 bool random_starts = true) {
  const SolverSettings& s = opts.settings;
  if (opts.solver == PhaseSolver::Pgd) {
    const int restarts = random_starts || !warm ? s.pgd_restarts : 0;
    PhaseSolution out = pgd_phase_restarts(prob, restarts, pgd_options(s), rng, warm);
    refine_phase(prob, s, out);
    return out;
  }

  SdpOptions so;
  so.tol = s.sdp_tol;
  so.max_iters = s.sdp_max_iters;
  const SdpSolution sdp = solve_unit_diag_sdp(prob.a, so, sdp_state);
  PhaseSolution out = sdp_round(sdp.v, prob, s.rounding_draws, rng);
  out.report.iterations = sdp.iterations;
  out.report.converged = sdp.converged;
  if (warm) {
    const double w = phase_objective(prob, *warm);
    if (w > out.report.objective) {
      out.phases = *warm;
      out.report.objective = w;
    }
  }
  refine_phase(prob, s, out);
  return out;
}

inline void require_rank_one(const ChannelSet& ch, const char* who) {
  if (!ch.is_rank_one())
    throw PreconditionError(std::string(who) + ": requires a rank-one AP-IRS link");
}

// sigma2 (2^R - 1) / q at the given beamformer, q evaluated directly so the
// rate constraint is tight to rounding at the returned power.
inline std::optional<double> tight_power(const EffectiveChannels& eff,
                                         const ChannelSet& ch, double rate_r,
                                         double sigma2,
                                         const ComplexVector& omega) {
  const double q = secrecy_quadratic(eff.h_r, eff.h_e, ch.alpha_r, ch.alpha_e,
                                     rate_r, omega);
  return required_power_full_rank(q, rate_r, sigma2);
}

// lambda* above the rounding level of the secrecy matrix.
inline bool reachable(const BeamformResult& beam, const EffectiveChannels& eff,
                      const ChannelSet& ch, double rate_r) {
  const double scale = ch.alpha_r * eff.h_r.squaredNorm() +
                       std::exp2(rate_r) * ch.alpha_e * eff.h_e.squaredNorm();
  return beam.lambda_star > 1e-12 * scale;
}

struct LambdaPoint {
  double lambda = 0.0;
  ComplexVector omega;
};

inline LambdaPoint lambda_at(const ChannelSet& ch, const RealVector& theta,
                             double rate_r) {
  const EffectiveChannels eff = effective_channels(ch, PhaseVector(theta));
  const BeamformResult b =
      eig_beamformer(eff.h_r, eff.h_e, ch.alpha_r, ch.alpha_e, rate_r);
  return {b.lambda_star, b.omega};
}

// Armijo gradient ascent on lambda*(theta), the largest eigenvalue of the
// secrecy matrix of the effective channels. Its gradient is the gradient of
// v^H A'(w) v at the current principal w, so no extra derivative code is
// needed. Returns the number of accepted steps.
inline int ascend_lambda(const ChannelSet& ch, const ComplexMatrix& g,
                         double rate_r, const SolverSettings& s,
                         PhaseVector& phases, ComplexVector& omega) {
  RealVector theta = phases.as_real();
  LambdaPoint cur = lambda_at(ch, theta, rate_r);
  const auto grad = [&](const LambdaPoint& pt, const RealVector& t) {
    const PhaseProblem prob = build_phase_problem(
        g.adjoint() * pt.omega, ch.h_r, ch.h_e, ch.alpha_r, ch.alpha_e, rate_r);
    return std::pair<RealVector, double>{
        -detail::gradient_at(prob.a, detail::unimodular_of(t)), prob.a.norm()};
  };
  auto [gr, scale] = grad(cur, theta);
  if (!(scale > 0.0)) return 0;
  const PgdOptions po = pgd_options(s);
  int accepted = 0;
  while (accepted < po.max_iters) {
    const double gnorm2 = gr.squaredNorm();
    if (std::sqrt(gnorm2) < po.eps * scale) break;
    double mu = po.initial_step / scale;
    bool stepped = false;
    for (int h = 0; h <= po.max_halvings; ++h, mu *= po.shrink) {
      const RealVector trial = theta + mu * gr;
      const LambdaPoint next = lambda_at(ch, trial, rate_r);
      if (next.lambda >= cur.lambda + po.armijo_c * mu * gnorm2) {
        theta = trial;
        cur = next;
        stepped = true;
        break;
      }
    }
    if (!stepped) break;
    ++accepted;
    std::tie(gr, scale) = grad(cur, theta);
  }
  phases = PhaseVector(theta);
  omega = cur.omega;
  return accepted;
}

}  // namespace detail

/// Smallest P in (0, p_cap] with rate(P) >= target: a log-spaced scan
/// locates the first crossing, bisection refines it. nullopt if rate(p_cap)
/// stays below the target everywhere on the scan.
inline std::optional<double> solve_rate_equation(
    const std::function<double(double)>& rate, double target, double p_cap,
    int max_bisections = 200) {
  constexpr int kScan = 400;      // points
  constexpr double kDecades = 20.0;
  double lo = 0.0;
  double hi = -1.0;
  for (int j = 0; j <= kScan; ++j) {
    const double p = p_cap * std::pow(10.0, kDecades * (j - kScan) / kScan);
    if (rate(p) >= target) {
      hi = p;
      break;
    }
    lo = p;
  }
  if (hi < 0.0) return std::nullopt;
  for (int it = 0; it < max_bisections && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rate(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

inline DesignResult solve_rank_one(const ChannelSet& ch, double rate_r,
                                   double sigma2, const DesignOptions& opts) {
  detail::require_rank_one(ch, "solve_rank_one");
  const auto& link = ch.rank_one();
  DesignResult res;
  res.method = opts.solver == PhaseSolver::Sdp ? DesignMethod::RankOneSDP
                                               : DesignMethod::RankOnePGD;
  res.omega = rank_one_beamformer(link.a).omega;
  const PhaseProblem prob = build_phase_problem(link.b, ch.h_r, ch.h_e,
                                                ch.alpha_r, ch.alpha_e, rate_r);
  Rng rng(derive_seed(opts.seed, 0));
  PhaseSolution ps = detail::solve_phase(prob, opts, rng, std::nullopt);
  res.phases = ps.phases;
  res.report = std::move(ps.report);
  res.outer_iterations = 1;
  res.power_w = required_power_rank_one(ch, res.phases, rate_r, sigma2);
  if (res.power_w) {
    res.achieved_rate_bits =
        capacity_full(ch, res.phases, res.omega, *res.power_w, sigma2).value_bits;
    res.power_history.push_back(*res.power_w);
  }
  return res;
}

inline DesignResult solve_full_rank(const ChannelSet& ch, double rate_r,
                                    double sigma2, const DesignOptions& opts) {
  ch.check_dimensions();
  const SolverSettings& s = opts.settings;
  const Eigen::Index n = ch.elements();
  const ComplexMatrix g = ch.g();
  DesignResult res;
  res.method = DesignMethod::FullRankAlternating;

  // Theta = I first, then up to 10 random restarts. When the rate is
  // unreachable at a start, one phase step on A'(w) with w matched to the
  // legitimate channel tries to repair it.
  Rng restart_rng(derive_seed(opts.seed, 1000));
  PhaseVector theta;
  EffectiveChannels eff;
  BeamformResult beam;
  for (int attempt = 0; attempt <= 10; ++attempt) {
    theta = attempt == 0 ? PhaseVector::zeros(n) : PhaseVector::random(n, restart_rng);
    eff = effective_channels(ch, theta);
    beam = eig_beamformer(eff.h_r, eff.h_e, ch.alpha_r, ch.alpha_e, rate_r);
    if (detail::reachable(beam, eff, ch, rate_r)) break;
    if (!(eff.h_r.norm() > 0.0)) continue;
    const PhaseProblem prob =
        build_phase_problem(g.adjoint() * eff.h_r.normalized(), ch.h_r, ch.h_e,
                            ch.alpha_r, ch.alpha_e, rate_r);
    Rng rng(derive_seed(opts.seed, 2000 + static_cast<std::uint64_t>(attempt)));
    theta = detail::solve_phase(prob, opts, rng, theta).phases;
    eff = effective_channels(ch, theta);
    beam = eig_beamformer(eff.h_r, eff.h_e, ch.alpha_r, ch.alpha_e, rate_r);
    if (detail::reachable(beam, eff, ch, rate_r)) break;
  }
  res.omega = beam.omega;
  res.phases = theta;
  if (!detail::reachable(beam, eff, ch, rate_r)) return res;
  std::optional<double> power = detail::tight_power(eff, ch, rate_r, sigma2, beam.omega);
  if (!power) return res;
  res.power_history.push_back(*power);

  // Random PGD starts on the first pass only; later passes refine the
  // previous phases. SDP passes reuse the previous ADMM iterate.
  int total_iters = 0;
  bool settled = false;
  SdpWarmStart sdp_state;
  for (int outer = 0; outer < s.outer_max_iters; ++outer) {
    const PhaseProblem prob = build_phase_problem(
        g.adjoint() * res.omega, ch.h_r, ch.h_e, ch.alpha_r, ch.alpha_e, rate_r);
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(outer)));
    PhaseSolution ps = detail::solve_phase(prob, opts, rng, res.phases,
                                           &sdp_state, outer == 0);
    total_iters += ps.report.iterations;
    res.report = std::move(ps.report);
    ++res.outer_iterations;

    const EffectiveChannels next_eff = effective_channels(ch, ps.phases);
    const BeamformResult next =
        eig_beamformer(next_eff.h_r, next_eff.h_e, ch.alpha_r, ch.alpha_e, rate_r);
    const std::optional<double> next_power =
        detail::tight_power(next_eff, ch, rate_r, sigma2, next.omega);
    if (!next_power || *next_power > *power) {
      settled = true;  // keep the previous iterate
      break;
    }
    const double rel = (*power - *next_power) / *power;
    res.phases = ps.phases;
    res.omega = next.omega;
    power = next_power;
    res.power_history.push_back(*power);
    if (rel < s.outer_tol) {
      settled = true;
      break;
    }
  }
  // The alternation creeps when w and Theta are strongly coupled; finish
  // with direct ascent on lambda*(Theta), which only lowers the power.
  {
    PhaseVector phases = res.phases;
    ComplexVector omega = res.omega;
    total_iters += detail::ascend_lambda(ch, g, rate_r, s, phases, omega);
    const EffectiveChannels fin = effective_channels(ch, phases);
    const std::optional<double> fin_power =
        detail::tight_power(fin, ch, rate_r, sigma2, omega);
    if (fin_power && *fin_power < *power) {
      res.phases = phases;
      res.omega = omega;
      power = fin_power;
      res.power_history.push_back(*power);
    }
  }
  res.report.iterations = total_iters;
  res.report.converged = res.report.converged && settled;
  res.report.objective =
      phase_objective(build_phase_problem(g.adjoint() * res.omega, ch.h_r,
                                          ch.h_e, ch.alpha_r, ch.alpha_e, rate_r),
                      res.phases);
  res.power_w = power;
  res.achieved_rate_bits =
      capacity_full(ch, res.phases, res.omega, *power, sigma2).value_bits;
  return res;
}

namespace detail {

inline double power_cap(const ChannelSet& ch, double sigma2) {
  double amin = std::numeric_limits<double>::infinity();
  for (double a : {ch.alpha_r, ch.alpha_e})
    if (a > 0.0) amin = std::min(amin, a);
  if (!std::isfinite(amin)) return 0.0;
  return 1e6 * sigma2 / amin;
}

inline double f1_or_zero(double x) { return x > 0.0 ? f1(x) : 0.0; }

// Expected-rate model of the statistical designs, per unit power.
struct StatRateModel {
  double legit_gain = 0.0;  // deterministic SNR per watt (stat-eve only)
  double x_r = 0.0;         // F1 argument per watt (stat-both only)
  double x_e = 0.0;         // F1 argument per watt
  bool legit_deterministic = true;

  double operator()(double p) const {
    const double legit = legit_deterministic ? std::log2(1.0 + legit_gain * p)
                                             : f1_or_zero(x_r * p);
    return legit - f1_or_zero(x_e * p);
  }
};

inline StatRateModel stat_eve_model(const ChannelSet& ch, const PhaseVector& theta,
                                    double sigma2) {
  const auto& l = ch.rank_one();
  const ComplexVector tb = theta.unimodular().cwiseProduct(l.b);
  StatRateModel m;
  m.legit_gain = ch.alpha_r * std::norm(ch.h_r.dot(tb)) * l.a.squaredNorm() / sigma2;
  m.x_e = ch.alpha_e * ch.sigma2_he * l.a.squaredNorm() * l.b.squaredNorm() / sigma2;
  return m;
}

inline StatRateModel stat_both_model(const ChannelSet& ch, double sigma2) {
  const auto& l = ch.rank_one();
  const double ab = l.a.squaredNorm() * l.b.squaredNorm();
  StatRateModel m;
  m.legit_deterministic = false;
  m.x_r = ch.alpha_r * ch.sigma2_hr * ab / sigma2;
  m.x_e = ch.alpha_e * ch.sigma2_he * ab / sigma2;
  return m;
}

}  // namespace detail

inline DesignResult solve_stat_eve(const ChannelSet& ch, double rate_r,
                                   double sigma2) {
  detail::require_rank_one(ch, "solve_stat_eve");
  if (!(rate_r > 0.0)) throw PreconditionError("solve_stat_eve: R must be > 0");
  const auto& l = ch.rank_one();
  DesignResult res;
  res.method = DesignMethod::StatEveClosedForm;
  res.omega = rank_one_beamformer(l.a).omega;
  res.phases = stat_eve_phase(ch.h_r, l.b);
  res.outer_iterations = 1;
  res.report.converged = true;
  const detail::StatRateModel model = detail::stat_eve_model(ch, res.phases, sigma2);
  res.power_w = solve_rate_equation(model, rate_r, detail::power_cap(ch, sigma2));
  if (res.power_w) {
    res.achieved_rate_bits = model(*res.power_w);
    res.power_history.push_back(*res.power_w);
  }
  return res;
}

inline DesignResult solve_stat_both(const ChannelSet& ch, double rate_r,
                                    double sigma2) {
  detail::require_rank_one(ch, "solve_stat_both");
  if (!(rate_r > 0.0)) throw PreconditionError("solve_stat_both: R must be > 0");
  const auto& l = ch.rank_one();
  DesignResult res;
  res.method = DesignMethod::StatBothClosedForm;
  res.omega = rank_one_beamformer(l.a).omega;
  res.phases = PhaseVector::zeros(ch.elements());
  res.outer_iterations = 1;
  res.report.converged = true;
  const detail::StatRateModel model = detail::stat_both_model(ch, sigma2);
  if (model.x_r <= model.x_e) return res;  // identical or worse legit link
  res.power_w = solve_rate_equation(model, rate_r, detail::power_cap(ch, sigma2));
  if (res.power_w) {
    res.achieved_rate_bits = model(*res.power_w);
    res.power_history.push_back(*res.power_w);
  }
  return res;
}

struct VerificationReport {
  bool feasible = false;
  double ratio = 0.0;   // achieved (1 + SNR_r) / (1 + SNR_e), or 2^C
  double target = 0.0;  // 2^R
  double slack = 0.0;   // ratio / target - 1
  bool omega_unit = false;
  bool tight = false;
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
};

/// Recomputes the secrecy constraint from scratch at the returned power.
/// Full-CSI designs are checked against the instantaneous ratio; the
/// statistical designs against 2^C with C their closed-form expected rate.
inline VerificationReport verify_design(const ChannelSet& ch,
                                        const DesignResult& result,
                                        double rate_r, double sigma2) {
  VerificationReport rep;
  rep.target = std::exp2(rate_r);
  rep.omega_unit = std::abs(result.omega.norm() - 1.0) < 1e-10;
  if (!rep.omega_unit) rep.issues.push_back("beamformer is not unit norm");
  rep.feasible = result.feasible();
  if (!rep.feasible) {
    rep.issues.push_back("design is infeasible");
    return rep;
  }
  const double p = *result.power_w;
  switch (result.method) {
    case DesignMethod::StatEveClosedForm:
      rep.ratio = std::exp2(detail::stat_eve_model(ch, result.phases, sigma2)(p));
      break;
    case DesignMethod::StatBothClosedForm:
      rep.ratio = std::exp2(detail::stat_both_model(ch, sigma2)(p));
      break;
    default: {
      const ComplexVector c = cascaded_response(ch, result.phases, result.omega);
      const double num = sigma2 + ch.alpha_r * p * std::norm(ch.h_r.dot(c));
      const double den = sigma2 + ch.alpha_e * p * std::norm(ch.h_e.dot(c));
      rep.ratio = num / den;
    }
  }
  rep.slack = rep.ratio / rep.target - 1.0;
  rep.tight = std::abs(rep.slack) < 1e-8;
  if (rep.slack < -1e-8) rep.issues.push_back("secrecy constraint violated");
  return rep;
}

}  // namespace irssec
