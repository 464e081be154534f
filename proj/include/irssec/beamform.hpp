// SPDX-License-Identifier: Apache-2.0
//
// Transmit beamformer design and the minimum power that meets a target
// secrecy rate R. The beamformer is always unit norm; transmit power is the
// separate scalar P = sigma2 (2^R - 1) / q, where q is the secrecy quadratic
// form alpha_r |h_r'^H w|^2 - 2^R alpha_e |h_e'^H w|^2. A rate is
// reachable at finite power only when q > 0.

#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "irssec/channel.hpp"
#include "irssec/error.hpp"
#include "irssec/numkernel.hpp"
#include "irssec/phase_vector.hpp"

namespace irssec {

enum class BeamformMethod { RankOneClosedForm, EigenvalueBased };

struct BeamformResult {
  ComplexVector omega;
  double lambda_star = 0.0;  // only meaningful for EigenvalueBased
  BeamformMethod method = BeamformMethod::RankOneClosedForm;
};

/// w = a / ||a||; maximizes |a^H w| over unit w.
inline BeamformResult rank_one_beamformer(const ComplexVector& a) {
  const double n = a.norm();
  if (!(n > 0.0)) throw ZeroVector("rank_one_beamformer: a is zero");
  return {a / n, 0.0, BeamformMethod::RankOneClosedForm};
}

struct EffectiveChannels {
  ComplexVector h_r;  // G Theta^H h_r, so that h_r^H w = h_r^H Theta G^H w
  ComplexVector h_e;
};

inline EffectiveChannels effective_channels(const ChannelSet& ch,
                                            const PhaseVector& theta) {
  ch.check_dimensions();
  if (theta.size() != ch.elements())
    throw DimensionMismatch("effective_channels: phase length mismatch");
  const ComplexVector vc = theta.unimodular().conjugate();
  const ComplexMatrix g = ch.g();
  return {g * vc.cwiseProduct(ch.h_r), g * vc.cwiseProduct(ch.h_e)};
}

/// alpha_r h_r h_r^H - 2^R alpha_e h_e h_e^H.
inline ComplexMatrix secrecy_matrix(const ComplexVector& h_r,
                                    const ComplexVector& h_e, double alpha_r,
                                    double alpha_e, double rate_r) {
  if (h_r.size() != h_e.size())
    throw DimensionMismatch("secrecy_matrix: channel length mismatch");
  const double w = std::exp2(rate_r) * alpha_e;
  return hermitize(alpha_r * (h_r * h_r.adjoint()) - w * (h_e * h_e.adjoint()));
}

/// Rayleigh quotient of secrecy_matrix at unit w, evaluated from the two
/// squared gains directly.
inline double secrecy_quadratic(const ComplexVector& h_r,
                                const ComplexVector& h_e, double alpha_r,
                                double alpha_e, double rate_r,
                                const ComplexVector& omega) {
  return alpha_r * std::norm(h_r.dot(omega)) -
         std::exp2(rate_r) * alpha_e * std::norm(h_e.dot(omega));
}

/// Principal eigenvector of the secrecy matrix; lambda_star <= 0 means the
/// rate is unreachable for the phases that produced these channels.
inline BeamformResult eig_beamformer(const ComplexVector& h_r_eff,
                                     const ComplexVector& h_e_eff,
                                     double alpha_r, double alpha_e,
                                     double rate_r) {
  if (!(rate_r > 0.0)) throw PreconditionError("eig_beamformer: R must be > 0");
  const EigPair top = max_eigpair(
      secrecy_matrix(h_r_eff, h_e_eff, alpha_r, alpha_e, rate_r));
  return {top.vector, top.value, BeamformMethod::EigenvalueBased};
}

/// sigma2 (2^R - 1) / (||a||^2 D) with
/// D = alpha_r |h_r^H Theta b|^2 - 2^R alpha_e |h_e^H Theta b|^2;
/// nullopt when D <= 0.
inline std::optional<double> required_power_rank_one(const ChannelSet& ch,
                                                     const PhaseVector& theta,
                                                     double rate_r,
                                                     double sigma2) {
  if (!ch.is_rank_one())
    throw PreconditionError("required_power_rank_one: channel is full rank");
  if (!(rate_r > 0.0))
    throw PreconditionError("required_power_rank_one: R must be > 0");
  ch.check_dimensions();
  if (theta.size() != ch.elements())
    throw DimensionMismatch("required_power_rank_one: phase length mismatch");
  const auto& l = ch.rank_one();
  const ComplexVector tb = theta.unimodular().cwiseProduct(l.b);
  const double d = ch.alpha_r * std::norm(ch.h_r.dot(tb)) -
                   std::exp2(rate_r) * ch.alpha_e * std::norm(ch.h_e.dot(tb));
  if (!(d > 0.0)) return std::nullopt;
  return sigma2 * std::expm1(rate_r * std::log(2.0)) / (l.a.squaredNorm() * d);
}

/// sigma2 (2^R - 1) / lambda_star; nullopt when lambda_star <= 0.
inline std::optional<double> required_power_full_rank(double lambda_star,
                                                      double rate_r,
                                                      double sigma2) {
  if (!(rate_r > 0.0))
    throw PreconditionError("required_power_full_rank: R must be > 0");
  if (!(lambda_star > 0.0)) return std::nullopt;
  return sigma2 * std::expm1(rate_r * std::log(2.0)) / lambda_star;
}

}  // namespace irssec
