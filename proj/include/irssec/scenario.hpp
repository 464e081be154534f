// SPDX-License-Identifier: Apache-2.0
//
// Scenario description shared by the channel generator, the design
// pipelines and the experiment drivers. Defaults reproduce the reference
// simulation setup: 8 AP antennas, 8 IRS elements, AP at (0, 0, 25) m,
// IRS at (0, 100, 40) m, noise 1e-11 W, Rician factor 2, stopping
// tolerance 1e-4.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

namespace irssec {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline double distance(const Point3& p, const Point3& q) {
  return std::hypot(p.x - q.x, p.y - q.y, p.z - q.z);
}

/// Linear gain 10^{c0_db/10} d^{-exponent}.
struct PathLossModel {
  double c0_db = -30.0;
  double exponent = 3.0;

  friend bool operator==(const PathLossModel&, const PathLossModel&) = default;
};

enum class ChannelModel { RankOne, Rician };
enum class CsiMode { FullBoth, FullLegitStatEve, StatBoth };
enum class PhaseSolver { Sdp, Pgd };

struct SolverSettings {
  double pgd_eps = 1e-4;
  int pgd_max_iters = 5000;
  int pgd_restarts = 10;
  double sdp_tol = 1e-6;
  int sdp_max_iters = 20000;
  int rounding_draws = 200;
  double outer_tol = 1e-4;
  int outer_max_iters = 50;

  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

struct ScenarioConfig {
  Point3 ap_position{0.0, 0.0, 25.0};
  Point3 irs_position{0.0, 100.0, 40.0};
  Point3 user_position{0.0, 90.0, 1.8};
  // Not given by the reference setup; placed beyond the IRS on the user track.
  Point3 eve_position{0.0, 120.0, 1.8};

  int num_antennas = 8;
  int num_elements = 8;
  double ap_spacing = 0.5;   // d_t / lambda
  double irs_spacing = 0.5;  // d_I / lambda
  // nullopt: derived from the AP/IRS line of sight (see los_azimuths()).
  std::optional<double> ap_azimuth;
  std::optional<double> irs_azimuth;
  double ap_elevation = 3.14159265358979323846 / 2.0;
  double irs_elevation = 3.0 * 3.14159265358979323846 / 2.0;

  ChannelModel channel_model = ChannelModel::Rician;
  double rician_k = 2.0;
  double noise_variance_w = 1e-11;
  PathLossModel path_loss_user;
  PathLossModel path_loss_eve;
  double sigma2_hr = 1.0;
  double sigma2_he = 1.0;

  double target_rate_bits = 12.0;
  CsiMode csi_mode = CsiMode::FullBoth;
  PhaseSolver solver = PhaseSolver::Sdp;
  SolverSettings settings;

  int n_mc = 10000;
  int n_trials = 50;
  std::uint64_t seed = 1;
  // Per-trial user y coordinate for rate sweeps is drawn uniformly here.
  std::array<double, 2> user_y_range{80.0, 100.0};

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

}  // namespace irssec
