// SPDX-License-Identifier: Apache-2.0
//
// AP-IRS, IRS-user and IRS-eavesdropper channel construction. The AP-IRS
// link is either the pure line-of-sight product G = a b^H or a Rician mix
// of that product with i.i.d. CN(0, 1) scattering. There is no direct
// AP-user or AP-eavesdropper link.

#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <variant>

#include "irssec/error.hpp"
#include "irssec/numkernel.hpp"
#include "irssec/scenario.hpp"

namespace irssec {

/// Concrete array geometry with every angle resolved.
struct Geometry {
  Point3 ap_pos;
  Point3 irs_pos;
  Point3 user_pos;
  Point3 eve_pos;
  int num_antennas = 1;
  int num_elements = 1;
  double ap_spacing = 0.5;
  double irs_spacing = 0.5;
  double ap_azimuth = 0.0;
  double ap_elevation = 0.0;
  double irs_azimuth = 0.0;
  double irs_elevation = 0.0;
};

/// Departure angles of the AP-IRS line of sight: the AP angle is
/// atan((y_irs - y_ap) / (z_irs - z_ap)) and the IRS angle is pi minus it.
inline std::pair<double, double> los_azimuths(const Point3& ap,
                                              const Point3& irs) {
  const double t = std::atan2(irs.y - ap.y, irs.z - ap.z);
  return {t, kPi - t};
}

inline Geometry make_geometry(const ScenarioConfig& cfg) {
  const auto [ap_default, irs_default] =
      los_azimuths(cfg.ap_position, cfg.irs_position);
  Geometry g;
  g.ap_pos = cfg.ap_position;
  g.irs_pos = cfg.irs_position;
  g.user_pos = cfg.user_position;
  g.eve_pos = cfg.eve_position;
  g.num_antennas = cfg.num_antennas;
  g.num_elements = cfg.num_elements;
  g.ap_spacing = cfg.ap_spacing;
  g.irs_spacing = cfg.irs_spacing;
  g.ap_azimuth = cfg.ap_azimuth.value_or(ap_default);
  g.irs_azimuth = cfg.irs_azimuth.value_or(irs_default);
  g.ap_elevation = cfg.ap_elevation;
  g.irs_elevation = cfg.irs_elevation;
  return g;
}

struct RankOneLink {
  ComplexVector a;  // AP side, length M
  ComplexVector b;  // IRS side, length N
};

struct ChannelSet {
  std::variant<RankOneLink, ComplexMatrix> ap_irs;
  ComplexVector h_r;
  ComplexVector h_e;
  double alpha_r = 1.0;
  double alpha_e = 1.0;
  double sigma2_hr = 1.0;
  double sigma2_he = 1.0;

  bool is_rank_one() const {
    return std::holds_alternative<RankOneLink>(ap_irs);
  }
  const RankOneLink& rank_one() const { return std::get<RankOneLink>(ap_irs); }

  /// The M x N AP-IRS matrix (a b^H in rank-one mode).
  ComplexMatrix g() const {
    if (is_rank_one()) {
      const auto& l = rank_one();
      return l.a * l.b.adjoint();
    }
    return std::get<ComplexMatrix>(ap_irs);
  }

  Eigen::Index antennas() const {
    return is_rank_one() ? rank_one().a.size()
                         : std::get<ComplexMatrix>(ap_irs).rows();
  }
  Eigen::Index elements() const { return h_r.size(); }

  /// Throws DimensionMismatch unless every array agrees on (M, N).
  void check_dimensions() const {
    const Eigen::Index n = h_r.size();
    bool ok = h_e.size() == n && alpha_r >= 0.0 && alpha_e >= 0.0;
    if (is_rank_one()) {
      ok = ok && rank_one().b.size() == n && rank_one().a.size() > 0;
    } else {
      ok = ok && std::get<ComplexMatrix>(ap_irs).cols() == n;
    }
    if (!ok) throw DimensionMismatch("ChannelSet: inconsistent dimensions");
  }
};

/// entry m = exp(j 2 pi ratio (m-1) sin(azimuth) sin(elevation)).
inline ComplexVector steering_vector(int n_elems, double spacing_ratio,
                                     double azimuth, double elevation) {
  if (n_elems < 1)
    throw PreconditionError("steering_vector: need at least one element");
  const double step =
      kTwoPi * spacing_ratio * std::sin(azimuth) * std::sin(elevation);
  ComplexVector v(n_elems);
  for (int m = 0; m < n_elems; ++m) v(m) = std::polar(1.0, step * m);
  return v;
}

inline RankOneLink make_rank_one_g(const Geometry& geom) {
  return {steering_vector(geom.num_antennas, geom.ap_spacing, geom.ap_azimuth,
                          geom.ap_elevation),
          steering_vector(geom.num_elements, geom.irs_spacing,
                          geom.irs_azimuth, geom.irs_elevation)};
}

/// sqrt(K/(1+K)) a b^H + sqrt(1/(1+K)) G_nlos. The scattering part is drawn
/// even for infinite K so that matched seeds give the same stream.
inline ComplexMatrix make_rician_g(const Geometry& geom, double k_factor,
                                   Rng& rng) {
  if (!(k_factor >= 0.0))
    throw PreconditionError("make_rician_g: Rician factor must be >= 0");
  const auto [a, b] = make_rank_one_g(geom);
  ComplexMatrix nlos(geom.num_antennas, geom.num_elements);
  for (Eigen::Index j = 0; j < nlos.cols(); ++j)
    for (Eigen::Index i = 0; i < nlos.rows(); ++i)
      nlos(i, j) = rng.complex_normal(1.0);
  double los_w = 1.0;
  double nlos_w = 0.0;
  if (std::isfinite(k_factor)) {
    los_w = std::sqrt(k_factor / (1.0 + k_factor));
    nlos_w = std::sqrt(1.0 / (1.0 + k_factor));
  }
  return los_w * (a * b.adjoint()) + nlos_w * nlos;
}

inline double path_gain(const PathLossModel& model, double distance_m) {
  if (!(distance_m >= 1.0))
    throw DomainError("path_gain: distance below the 1 m reference");
  return std::pow(10.0, model.c0_db / 10.0) *
         std::pow(distance_m, -model.exponent);
}

/// One fading realization: h_r, h_e, then (Rician only) the scattering part
/// of G, all from `rng` in that order.
inline ChannelSet sample_channels(const ScenarioConfig& cfg, Rng& rng) {
  const Geometry geom = make_geometry(cfg);
  ChannelSet ch;
  ch.alpha_r = path_gain(cfg.path_loss_user, distance(geom.irs_pos, geom.user_pos));
  ch.alpha_e = path_gain(cfg.path_loss_eve, distance(geom.irs_pos, geom.eve_pos));
  ch.sigma2_hr = cfg.sigma2_hr;
  ch.sigma2_he = cfg.sigma2_he;
  ch.h_r = sample_cn(cfg.num_elements, cfg.sigma2_hr, rng);
  ch.h_e = sample_cn(cfg.num_elements, cfg.sigma2_he, rng);
  if (cfg.channel_model == ChannelModel::RankOne) {
    ch.ap_irs = make_rank_one_g(geom);
  } else {
    ch.ap_irs = make_rician_g(geom, cfg.rician_k, rng);
  }
  return ch;
}

}  // namespace irssec
