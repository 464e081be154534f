// SPDX-License-Identifier: Apache-2.0
//
// Batch experiments over fading realizations and their CSV output.
//
// Seed discipline: trial t draws its channels from derive_seed(seed, t), and
// the phase solvers of that trial use derive_seed(that, kSolverStream). The
// swept variable (rate, user position, solver choice) never touches either
// stream, so rows and solver variants are compared on identical fading.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irssec/channel.hpp"
#include "irssec/config.hpp"
#include "irssec/error.hpp"
#include "irssec/jointdesign.hpp"

namespace irssec {

inline constexpr std::uint64_t kSolverStream = 0x5eed;

inline DesignOptions design_options(const ScenarioConfig& cfg,
                                    std::uint64_t seed) {
  DesignOptions o;
  o.solver = cfg.solver;
  o.settings = cfg.settings;
  o.seed = seed;
  return o;
}

/// Runs the pipeline matching the configured CSI mode and channel model.
inline DesignResult run_design(const ScenarioConfig& cfg, const ChannelSet& ch,
                               double rate_r, std::uint64_t solver_seed) {
  const double s2 = cfg.noise_variance_w;
  switch (cfg.csi_mode) {
    case CsiMode::FullLegitStatEve: return solve_stat_eve(ch, rate_r, s2);
    case CsiMode::StatBoth: return solve_stat_both(ch, rate_r, s2);
    case CsiMode::FullBoth: break;
  }
  const DesignOptions opts = design_options(cfg, solver_seed);
  return ch.is_rank_one() ? solve_rank_one(ch, rate_r, s2, opts)
                          : solve_full_rank(ch, rate_r, s2, opts);
}

struct SweepRow {
  double x = 0.0;
  double mean_power_w = 0.0;  // over feasible trials; NaN if none
  double power_std = 0.0;
  double feasibility_rate = 0.0;
  double mean_iterations = 0.0;
  std::vector<std::optional<double>> trial_power_w;  // not written to CSV
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline const char* kSweepCsvHeader =
    "x,mean_power_w,power_std,feasibility_rate,mean_iterations";

namespace detail {

inline void finish_row(SweepRow& row, const std::vector<int>& iters) {
  std::vector<double> p;
  for (const auto& t : row.trial_power_w)
    if (t) p.push_back(*t);
  const double n = static_cast<double>(row.trial_power_w.size());
  row.feasibility_rate = n > 0 ? static_cast<double>(p.size()) / n : 0.0;
  if (p.empty()) {
    row.mean_power_w = std::numeric_limits<double>::quiet_NaN();
    row.power_std = std::numeric_limits<double>::quiet_NaN();
  } else {
    double mean = 0.0;
    for (double v : p) mean += v;
    mean /= static_cast<double>(p.size());
    double ss = 0.0;
    for (double v : p) ss += (v - mean) * (v - mean);
    row.mean_power_w = mean;
    row.power_std = p.size() > 1 ? std::sqrt(ss / static_cast<double>(p.size() - 1)) : 0.0;
  }
  double it = 0.0;
  for (int v : iters) it += v;
  row.mean_iterations = iters.empty() ? 0.0 : it / static_cast<double>(iters.size());
}

inline void require_valid(const ScenarioConfig& cfg) {
  auto v = validate(cfg);
  if (!v.empty()) throw ValidationError(std::move(v));
}

}  // namespace detail

/// Mean required power per target rate. Each trial places the user at a y
/// drawn uniformly from cfg.user_y_range, then draws its fading.
inline SweepResult sweep_rate(const ScenarioConfig& cfg,
                              const std::vector<double>& rates) {
  detail::require_valid(cfg);
  if (rates.empty()) throw PreconditionError("sweep_rate: no rates given");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0)) throw PreconditionError("sweep_rate: rates must be > 0");
    if (i > 0 && !(rates[i] > rates[i - 1]))
      throw PreconditionError("sweep_rate: rates must be ascending");
  }
  SweepResult out;
  out.rows.resize(rates.size());
  std::vector<std::vector<int>> iters(rates.size());
  for (std::size_t r = 0; r < rates.size(); ++r) out.rows[r].x = rates[r];

  for (int t = 0; t < cfg.n_trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(trial_seed);
    ScenarioConfig trial_cfg = cfg;
    trial_cfg.user_position.y = rng.uniform(cfg.user_y_range[0], cfg.user_y_range[1]);
    const ChannelSet ch = sample_channels(trial_cfg, rng);
    const std::uint64_t solver_seed = derive_seed(trial_seed, kSolverStream);
    for (std::size_t r = 0; r < rates.size(); ++r) {
      const DesignResult d = run_design(cfg, ch, rates[r], solver_seed);
      out.rows[r].trial_power_w.push_back(d.power_w);
      iters[r].push_back(d.report.iterations);
    }
  }
  for (std::size_t r = 0; r < rates.size(); ++r) detail::finish_row(out.rows[r], iters[r]);
  return out;
}

/// Mean required power per user y coordinate at cfg.target_rate_bits. The
/// fading of trial t is identical at every position.
inline SweepResult sweep_distance(const ScenarioConfig& cfg,
                                  const std::vector<double>& user_y_positions) {
  detail::require_valid(cfg);
  if (user_y_positions.empty())
    throw PreconditionError("sweep_distance: no positions given");
  SweepResult out;
  for (double y : user_y_positions) {
    if (!std::isfinite(y)) throw PreconditionError("sweep_distance: non-finite position");
    ScenarioConfig pos_cfg = cfg;
    pos_cfg.user_position.y = y;
    SweepRow row;
    row.x = y;
    std::vector<int> iters;
    for (int t = 0; t < cfg.n_trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
      Rng rng(trial_seed);
      const ChannelSet ch = sample_channels(pos_cfg, rng);
      const DesignResult d = run_design(pos_cfg, ch, cfg.target_rate_bits,
                                        derive_seed(trial_seed, kSolverStream));
      row.trial_power_w.push_back(d.power_w);
      iters.push_back(d.report.iterations);
    }
    detail::finish_row(row, iters);
    out.rows.push_back(std::move(row));
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.x < b.x; });
  return out;
}

struct OracleRow {
  int trial = 0;
  double oracle_objective = 0.0;
  double sdp_objective = 0.0;
  double sdp_upper_bound = 0.0;
  double pgd_objective = 0.0;
  double sdp_gap = 0.0;  // (oracle - sdp) / |oracle|
  double pgd_gap = 0.0;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  int grid_levels = 128;
  double median_sdp_gap = 0.0;
  double median_pgd_gap = 0.0;
  double min_gap = 0.0;  // most negative gap over both solvers
};

inline const char* kOracleCsvHeader =
    "trial,oracle_objective,sdp_objective,sdp_upper_bound,pgd_objective,sdp_gap,pgd_gap";

/// Phase problem of one trial: A from b in rank-one mode, or A' at the
/// Theta = I eigen-beamformer in full-rank mode.
inline PhaseProblem trial_phase_problem(const ChannelSet& ch, double rate_r) {
  if (ch.is_rank_one())
    return build_phase_problem(ch.rank_one().b, ch.h_r, ch.h_e, ch.alpha_r,
                               ch.alpha_e, rate_r);
  const EffectiveChannels eff =
      effective_channels(ch, PhaseVector::zeros(ch.elements()));
  const BeamformResult beam =
      eig_beamformer(eff.h_r, eff.h_e, ch.alpha_r, ch.alpha_e, rate_r);
  return build_phase_problem(ch.g().adjoint() * beam.omega, ch.h_r, ch.h_e,
                             ch.alpha_r, ch.alpha_e, rate_r);
}

/// Exhaustive grid search (with PGD polish) against SDP+rounding and
/// multi-start PGD on small IRS sizes.
inline OracleReport oracle_compare(const ScenarioConfig& cfg, int grid_levels = 128) {
  detail::require_valid(cfg);
  if (cfg.num_elements > 4) throw TooLarge("oracle_compare: num_elements must be <= 4");
  OracleReport rep;
  rep.grid_levels = grid_levels;
  std::vector<double> sdp_gaps;
  std::vector<double> pgd_gaps;
  for (int t = 0; t < cfg.n_trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(trial_seed);
    const ChannelSet ch = sample_channels(cfg, rng);
    const PhaseProblem prob = trial_phase_problem(ch, cfg.target_rate_bits);
    const BruteForceResult oracle = brute_force_phase(prob, grid_levels, true);

    ScenarioConfig c = cfg;
    c.solver = PhaseSolver::Sdp;
    Rng sdp_rng(derive_seed(trial_seed, kSolverStream));
    const PhaseSolution sdp = detail::solve_phase(
        prob, design_options(c, trial_seed), sdp_rng, std::nullopt);
    c.solver = PhaseSolver::Pgd;
    Rng pgd_rng(derive_seed(trial_seed, kSolverStream));
    const PhaseSolution pgd = detail::solve_phase(
        prob, design_options(c, trial_seed), pgd_rng, std::nullopt);

    OracleRow row;
    row.trial = t;
    row.oracle_objective = oracle.objective;
    row.sdp_objective = sdp.report.objective;
    row.sdp_upper_bound = sdp.report.sdp_upper_bound.value_or(0.0);
    row.pgd_objective = pgd.report.objective;
    const double denom = std::max(std::abs(oracle.objective),
                                  std::numeric_limits<double>::min());
    row.sdp_gap = (oracle.objective - row.sdp_objective) / denom;
    row.pgd_gap = (oracle.objective - row.pgd_objective) / denom;
    sdp_gaps.push_back(row.sdp_gap);
    pgd_gaps.push_back(row.pgd_gap);
    rep.rows.push_back(row);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  rep.median_sdp_gap = median(sdp_gaps);
  rep.median_pgd_gap = median(pgd_gaps);
  rep.min_gap = std::min(*std::min_element(sdp_gaps.begin(), sdp_gaps.end()),
                         *std::min_element(pgd_gaps.begin(), pgd_gaps.end()));
  return rep;
}

/// Shortest round-trip decimal representation, independent of locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("not a number: '" + s + "'", 0);
  return v;
}

inline std::string sweep_csv(const SweepResult& result) {
  std::string out = std::string(kSweepCsvHeader) + "\n";
  for (const auto& r : result.rows) {
    out += format_double(r.x) + "," + format_double(r.mean_power_w) + "," +
           format_double(r.power_std) + "," + format_double(r.feasibility_rate) +
           "," + format_double(r.mean_iterations) + "\n";
  }
  return out;
}

inline std::string oracle_csv(const OracleReport& rep) {
  std::string out = std::string(kOracleCsvHeader) + "\n";
  for (const auto& r : rep.rows) {
    out += std::to_string(r.trial) + "," + format_double(r.oracle_objective) + "," +
           format_double(r.sdp_objective) + "," + format_double(r.sdp_upper_bound) +
           "," + format_double(r.pgd_objective) + "," + format_double(r.sdp_gap) +
           "," + format_double(r.pgd_gap) + "\n";
  }
  return out;
}

inline void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

inline void emit_csv(const SweepResult& result, const std::string& path) {
  write_text(sweep_csv(result), path);
}

inline void emit_csv(const OracleReport& rep, const std::string& path) {
  write_text(oracle_csv(rep), path);
}

/// Reads a sweep CSV back (per-trial powers are not stored in the file).
inline SweepResult read_sweep_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line != kSweepCsvHeader)
    throw ParseError("unexpected sweep CSV header", 1);
  SweepResult out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw ParseError("expected 5 columns", lineno);
    SweepRow r;
    r.x = parse_double(cells[0]);
    r.mean_power_w = parse_double(cells[1]);
    r.power_std = parse_double(cells[2]);
    r.feasibility_rate = parse_double(cells[3]);
    r.mean_iterations = parse_double(cells[4]);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::json to_json(const DesignResult& d, const VerificationReport& v) {
  using nlohmann::json;
  json omega = json::array();
  for (Eigen::Index i = 0; i < d.omega.size(); ++i)
    omega.push_back({d.omega(i).real(), d.omega(i).imag()});
  json j{{"method", to_string(d.method)},
         {"feasible", d.feasible()},
         {"power_w", d.power_w ? json(*d.power_w) : json(nullptr)},
         {"achieved_rate_bits", d.achieved_rate_bits},
         {"omega", omega},
         {"phases_rad", d.phases.values()},
         {"outer_iterations", d.outer_iterations},
         {"power_history_w", d.power_history},
         {"phase_report",
          {{"objective", d.report.objective},
           {"iterations", d.report.iterations},
           {"converged", d.report.converged},
           {"sdp_upper_bound", d.report.sdp_upper_bound
                                   ? json(*d.report.sdp_upper_bound)
                                   : json(nullptr)}}},
         {"verification",
          {{"ratio", v.ratio},
           {"target", v.target},
           {"slack", v.slack},
           {"tight", v.tight},
           {"omega_unit", v.omega_unit},
           {"issues", v.issues}}}};
  return j;
}

}  // namespace irssec
