// SPDX-License-Identifier: Apache-2.0
//
// Secrecy capacity of the IRS-assisted wiretap link under the three CSI
// assumptions, plus the closed-form ergodic rate F1 of an exponentially
// distributed SNR. All rates are in bits/s/Hz and may be negative; clamping
// is left to callers.

#pragma once

#include <cmath>

#include "irssec/channel.hpp"
#include "irssec/error.hpp"
#include "irssec/numkernel.hpp"
#include "irssec/phase_vector.hpp"

namespace irssec {

struct CapacityEstimate {
  double value_bits = 0.0;
  double std_error = 0.0;  // 0 for deterministic evaluations
  long n_samples = 0;
};

/// Theta G^H omega, the cascaded AP->IRS response seen by a reflect channel.
inline ComplexVector cascaded_response(const ChannelSet& ch,
                                       const PhaseVector& theta,
                                       const ComplexVector& omega) {
  ch.check_dimensions();
  if (theta.size() != ch.elements() || omega.size() != ch.antennas())
    throw DimensionMismatch("cascaded_response: size mismatch");
  ComplexVector g_omega;
  if (ch.is_rank_one()) {
    const auto& l = ch.rank_one();
    g_omega = l.b * l.a.dot(omega);  // b (a^H omega)
  } else {
    g_omega = std::get<ComplexMatrix>(ch.ap_irs).adjoint() * omega;
  }
  return theta.unimodular().cwiseProduct(g_omega);
}

/// h^H Theta G^H omega.
inline cdouble reflect_gain(const ChannelSet& ch, const ComplexVector& h,
                            const PhaseVector& theta,
                            const ComplexVector& omega) {
  const ComplexVector c = cascaded_response(ch, theta, omega);
  if (h.size() != c.size())
    throw DimensionMismatch("reflect_gain: channel length mismatch");
  return h.dot(c);
}

namespace detail {

inline void check_design_args(const ComplexVector& omega, double p,
                              double sigma2) {
  if (std::abs(omega.norm() - 1.0) > 1e-9)
    throw PreconditionError("capacity: beamformer must have unit norm");
  if (!(p >= 0.0)) throw PreconditionError("capacity: power must be >= 0");
  if (!(sigma2 > 0.0))
    throw PreconditionError("capacity: noise variance must be > 0");
}

// Mean and standard error of log2(1 + scale |h^H c|^2), h ~ CN(0, var I).
inline CapacityEstimate mc_log_rate(const ComplexVector& c, double scale,
                                    double var, int n_mc, Rng& rng) {
  if (n_mc < 100) throw PreconditionError("capacity: n_mc must be >= 100");
  double mean = 0.0;
  double m2 = 0.0;
  for (int k = 0; k < n_mc; ++k) {
    const ComplexVector h = sample_cn(c.size(), var, rng);
    const double x = std::log2(1.0 + scale * std::norm(h.dot(c)));
    const double delta = x - mean;
    mean += delta / (k + 1);
    m2 += delta * (x - mean);
  }
  const double var_hat = m2 / (n_mc - 1);
  return {mean, std::sqrt(var_hat / n_mc), n_mc};
}

}  // namespace detail

/// Both channels known:
/// log2(1 + a_r p |h_r^H Theta G^H w|^2 / s2) - log2(1 + a_e p |...|^2 / s2).
inline CapacityEstimate capacity_full(const ChannelSet& ch,
                                      const PhaseVector& theta,
                                      const ComplexVector& omega, double p,
                                      double sigma2) {
  detail::check_design_args(omega, p, sigma2);
  const ComplexVector c = cascaded_response(ch, theta, omega);
  const double snr_r = ch.alpha_r * p * std::norm(ch.h_r.dot(c)) / sigma2;
  const double snr_e = ch.alpha_e * p * std::norm(ch.h_e.dot(c)) / sigma2;
  return {std::log2(1.0 + snr_r) - std::log2(1.0 + snr_e), 0.0, 1};
}

/// Legitimate channel known, eavesdropper term averaged over fresh
/// h_e ~ CN(0, sigma2_he I).
inline CapacityEstimate capacity_stat_eve(const ChannelSet& ch,
                                          const PhaseVector& theta,
                                          const ComplexVector& omega, double p,
                                          double sigma2, int n_mc, Rng& rng) {
  detail::check_design_args(omega, p, sigma2);
  const ComplexVector c = cascaded_response(ch, theta, omega);
  const double legit =
      std::log2(1.0 + ch.alpha_r * p * std::norm(ch.h_r.dot(c)) / sigma2);
  const CapacityEstimate eve = detail::mc_log_rate(
      c, ch.alpha_e * p / sigma2, ch.sigma2_he, n_mc, rng);
  return {legit - eve.value_bits, eve.std_error, n_mc};
}

/// Both terms averaged over fresh reflect-channel draws.
inline CapacityEstimate capacity_stat_both(const ChannelSet& ch,
                                           const PhaseVector& theta,
                                           const ComplexVector& omega,
                                           double p, double sigma2, int n_mc,
                                           Rng& rng) {
  detail::check_design_args(omega, p, sigma2);
  const ComplexVector c = cascaded_response(ch, theta, omega);
  const CapacityEstimate legit = detail::mc_log_rate(
      c, ch.alpha_r * p / sigma2, ch.sigma2_hr, n_mc, rng);
  const CapacityEstimate eve = detail::mc_log_rate(
      c, ch.alpha_e * p / sigma2, ch.sigma2_he, n_mc, rng);
  return {legit.value_bits - eve.value_bits,
          std::hypot(legit.std_error, eve.std_error), n_mc};
}

/// F1(x) = E[log2(1 + x t)], t ~ Exp(1), = e^{1/x} E1(1/x) log2(e).
inline double f1(double x) {
  if (!(x > 0.0)) throw DomainError("f1: requires x > 0");
  return exp_scaled_e1(1.0 / x) * kLog2E;
}

}  // namespace irssec
