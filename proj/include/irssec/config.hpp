// SPDX-License-Identifier: Apache-2.0
//
// JSON scenario files. Every key is optional; absent keys take the
// ScenarioConfig defaults, unknown keys are rejected. Layout:
//
//   {
//     "geometry":   { "ap_position": [x, y, z], "irs_position": [...],
//                     "user_position": [...], "eve_position": [...],
//                     "num_antennas", "num_elements", "ap_spacing",
//                     "irs_spacing", "ap_azimuth" (null = from geometry),
//                     "irs_azimuth" (null = from geometry), "ap_elevation",
//                     "irs_elevation" },
//     "channel":    { "model": "rank_one" | "rician", "rician_k",
//                     "noise_variance_w", "sigma2_hr", "sigma2_he",
//                     "path_loss_user": { "c0_db", "exponent" },
//                     "path_loss_eve":  { "c0_db", "exponent" } },
//     "design":     { "target_rate_bits", "csi_mode": "full" | "stat_eve" |
//                     "stat_both", "solver": "sdp" | "pgd", "pgd_eps",
//                     "pgd_max_iters", "pgd_restarts", "sdp_tol",
//                     "sdp_max_iters", "rounding_draws", "outer_tol",
//                     "outer_max_iters" },
//     "experiment": { "n_mc", "n_trials", "seed", "user_y_range": [lo, hi] }
//   }

#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "irssec/error.hpp"
#include "irssec/scenario.hpp"

namespace irssec {

inline const char* to_string(ChannelModel m) {
  return m == ChannelModel::RankOne ? "rank_one" : "rician";
}
inline const char* to_string(CsiMode m) {
  switch (m) {
    case CsiMode::FullBoth: return "full";
    case CsiMode::FullLegitStatEve: return "stat_eve";
    case CsiMode::StatBoth: return "stat_both";
  }
  return "full";
}
inline const char* to_string(PhaseSolver s) {
  return s == PhaseSolver::Sdp ? "sdp" : "pgd";
}

inline std::optional<ChannelModel> parse_channel_model(const std::string& s) {
  if (s == "rank_one") return ChannelModel::RankOne;
  if (s == "rician") return ChannelModel::Rician;
  return std::nullopt;
}
inline std::optional<CsiMode> parse_csi_mode(const std::string& s) {
  if (s == "full") return CsiMode::FullBoth;
  if (s == "stat_eve") return CsiMode::FullLegitStatEve;
  if (s == "stat_both") return CsiMode::StatBoth;
  return std::nullopt;
}
inline std::optional<PhaseSolver> parse_solver(const std::string& s) {
  if (s == "sdp") return PhaseSolver::Sdp;
  if (s == "pgd") return PhaseSolver::Pgd;
  return std::nullopt;
}

inline nlohmann::json to_json(const ScenarioConfig& c) {
  using nlohmann::json;
  auto point = [](const Point3& p) { return json::array({p.x, p.y, p.z}); };
  auto loss = [](const PathLossModel& m) {
    return json{{"c0_db", m.c0_db}, {"exponent", m.exponent}};
  };
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  const SolverSettings& s = c.settings;
  return json{
      {"geometry",
       {{"ap_position", point(c.ap_position)},
        {"irs_position", point(c.irs_position)},
        {"user_position", point(c.user_position)},
        {"eve_position", point(c.eve_position)},
        {"num_antennas", c.num_antennas},
        {"num_elements", c.num_elements},
        {"ap_spacing", c.ap_spacing},
        {"irs_spacing", c.irs_spacing},
        {"ap_azimuth", opt(c.ap_azimuth)},
        {"irs_azimuth", opt(c.irs_azimuth)},
        {"ap_elevation", c.ap_elevation},
        {"irs_elevation", c.irs_elevation}}},
      {"channel",
       {{"model", to_string(c.channel_model)},
        {"rician_k", c.rician_k},
        {"noise_variance_w", c.noise_variance_w},
        {"sigma2_hr", c.sigma2_hr},
        {"sigma2_he", c.sigma2_he},
        {"path_loss_user", loss(c.path_loss_user)},
        {"path_loss_eve", loss(c.path_loss_eve)}}},
      {"design",
       {{"target_rate_bits", c.target_rate_bits},
        {"csi_mode", to_string(c.csi_mode)},
        {"solver", to_string(c.solver)},
        {"pgd_eps", s.pgd_eps},
        {"pgd_max_iters", s.pgd_max_iters},
        {"pgd_restarts", s.pgd_restarts},
        {"sdp_tol", s.sdp_tol},
        {"sdp_max_iters", s.sdp_max_iters},
        {"rounding_draws", s.rounding_draws},
        {"outer_tol", s.outer_tol},
        {"outer_max_iters", s.outer_max_iters}}},
      {"experiment",
       {{"n_mc", c.n_mc},
        {"n_trials", c.n_trials},
        {"seed", c.seed},
        {"user_y_range", json::array({c.user_y_range[0], c.user_y_range[1]})}}}};
}

/// Every constraint violation, empty when the scenario is usable.
inline std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> v;
  auto finite = [](const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
  };
  if (!finite(c.ap_position)) v.push_back("geometry.ap_position must be finite");
  if (!finite(c.irs_position)) v.push_back("geometry.irs_position must be finite");
  if (!finite(c.user_position)) v.push_back("geometry.user_position must be finite");
  if (!finite(c.eve_position)) v.push_back("geometry.eve_position must be finite");
  if (c.num_antennas < 1) v.push_back("geometry.num_antennas must be >= 1");
  if (c.num_elements < 1) v.push_back("geometry.num_elements must be >= 1");
  if (c.num_elements > 64) v.push_back("geometry.num_elements must be <= 64");
  if (c.num_antennas > 256) v.push_back("geometry.num_antennas must be <= 256");
  if (!(c.ap_spacing > 0.0)) v.push_back("geometry.ap_spacing must be > 0");
  if (!(c.irs_spacing > 0.0)) v.push_back("geometry.irs_spacing must be > 0");
  if (!(c.rician_k >= 0.0)) v.push_back("channel.rician_k must be >= 0");
  if (!(c.noise_variance_w > 0.0)) v.push_back("channel.noise_variance_w must be > 0");
  if (!(c.sigma2_hr > 0.0)) v.push_back("channel.sigma2_hr must be > 0");
  if (!(c.sigma2_he > 0.0)) v.push_back("channel.sigma2_he must be > 0");
  if (!(c.path_loss_user.exponent >= 2.0))
    v.push_back("channel.path_loss_user.exponent must be >= 2");
  if (!(c.path_loss_eve.exponent >= 2.0))
    v.push_back("channel.path_loss_eve.exponent must be >= 2");
  if (!std::isfinite(c.path_loss_user.c0_db))
    v.push_back("channel.path_loss_user.c0_db must be finite");
  if (!std::isfinite(c.path_loss_eve.c0_db))
    v.push_back("channel.path_loss_eve.c0_db must be finite");
  if (!(c.target_rate_bits > 0.0)) v.push_back("design.target_rate_bits must be > 0");
  if (c.csi_mode != CsiMode::FullBoth && c.channel_model != ChannelModel::RankOne)
    v.push_back("design.csi_mode stat_eve/stat_both requires channel.model rank_one");
  const SolverSettings& s = c.settings;
  if (!(s.pgd_eps > 0.0)) v.push_back("design.pgd_eps must be > 0");
  if (s.pgd_max_iters < 1) v.push_back("design.pgd_max_iters must be >= 1");
  if (s.pgd_restarts < 0) v.push_back("design.pgd_restarts must be >= 0");
  if (!(s.sdp_tol > 0.0)) v.push_back("design.sdp_tol must be > 0");
  if (s.sdp_max_iters < 1) v.push_back("design.sdp_max_iters must be >= 1");
  if (s.rounding_draws < 0) v.push_back("design.rounding_draws must be >= 0");
  if (!(s.outer_tol > 0.0)) v.push_back("design.outer_tol must be > 0");
  if (s.outer_max_iters < 1) v.push_back("design.outer_max_iters must be >= 1");
  if (c.n_mc < 100) v.push_back("experiment.n_mc must be >= 100");
  if (c.n_trials < 1) v.push_back("experiment.n_trials must be >= 1");
  if (!(c.user_y_range[0] <= c.user_y_range[1]))
    v.push_back("experiment.user_y_range must satisfy lo <= hi");
  return v;
}

namespace detail {

// Reads optional keys from one JSON object, collecting every problem.
class SectionReader {
 public:
  SectionReader(const nlohmann::json& obj, std::string prefix,
                std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(prefix_ + " must be an object");
  }

  void number(const char* key, double& out) {
    if (const auto* j = find(key)) {
      if (j->is_number()) out = j->get<double>();
      else fail(key, "a number");
    }
  }
  void integer(const char* key, int& out) {
    if (const auto* j = find(key)) {
      if (j->is_number_integer()) out = j->get<int>();
      else fail(key, "an integer");
    }
  }
  void unsigned64(const char* key, std::uint64_t& out) {
    if (const auto* j = find(key)) {
      if (j->is_number_unsigned() ||
          (j->is_number_integer() && j->get<std::int64_t>() >= 0))
        out = j->get<std::uint64_t>();
      else fail(key, "a non-negative integer");
    }
  }
  void optional_number(const char* key, std::optional<double>& out) {
    if (const auto* j = find(key)) {
      if (j->is_null()) out.reset();
      else if (j->is_number()) out = j->get<double>();
      else fail(key, "a number or null");
    }
  }
  void point(const char* key, Point3& out) {
    if (const auto* j = find(key)) {
      if (j->is_array() && j->size() == 3 &&
          std::all_of(j->begin(), j->end(), [](const auto& e) { return e.is_number(); }))
        out = {(*j)[0].get<double>(), (*j)[1].get<double>(), (*j)[2].get<double>()};
      else fail(key, "an array of 3 numbers");
    }
  }
  void pair(const char* key, std::array<double, 2>& out) {
    if (const auto* j = find(key)) {
      if (j->is_array() && j->size() == 2 && (*j)[0].is_number() && (*j)[1].is_number())
        out = {(*j)[0].get<double>(), (*j)[1].get<double>()};
      else fail(key, "an array of 2 numbers");
    }
  }
  template <typename Enum, typename Parser>
  void enumeration(const char* key, Enum& out, Parser parse, const char* choices) {
    if (const auto* j = find(key)) {
      std::optional<Enum> e;
      if (j->is_string()) e = parse(j->template get<std::string>());
      if (e) out = *e;
      else fail(key, choices);
    }
  }
  void path_loss(const char* key, PathLossModel& out) {
    if (const auto* j = find(key)) {
      SectionReader sub(*j, prefix_ + "." + key, errors_);
      sub.number("c0_db", out.c0_db);
      sub.number("exponent", out.exponent);
      sub.reject_unknown();
    }
  }
  const nlohmann::json* section(const char* key) { return find(key); }

  void reject_unknown() {
    if (!obj_.is_object()) return;
    for (const auto& item : obj_.items())
      if (!seen_.count(item.key()))
        errors_.push_back("unknown key " + prefix_ + "." + item.key());
  }

 private:
  const nlohmann::json* find(const char* key) {
    seen_.insert(key);
    if (!obj_.is_object()) return nullptr;
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  void fail(const char* key, const char* what) {
    errors_.push_back(prefix_ + "." + key + " must be " + what);
  }

  const nlohmann::json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

inline std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace detail

/// Overlays a parsed JSON document on `base`. Throws ValidationError with
/// every type error, unknown key and constraint violation found.
inline ScenarioConfig config_from_json(const nlohmann::json& doc,
                                       ScenarioConfig base = {}) {
  std::vector<std::string> errors;
  ScenarioConfig c = std::move(base);
  detail::SectionReader root(doc, "config", errors);

  if (const auto* g = root.section("geometry")) {
    detail::SectionReader r(*g, "geometry", errors);
    r.point("ap_position", c.ap_position);
    r.point("irs_position", c.irs_position);
    r.point("user_position", c.user_position);
    r.point("eve_position", c.eve_position);
    r.integer("num_antennas", c.num_antennas);
    r.integer("num_elements", c.num_elements);
    r.number("ap_spacing", c.ap_spacing);
    r.number("irs_spacing", c.irs_spacing);
    r.optional_number("ap_azimuth", c.ap_azimuth);
    r.optional_number("irs_azimuth", c.irs_azimuth);
    r.number("ap_elevation", c.ap_elevation);
    r.number("irs_elevation", c.irs_elevation);
    r.reject_unknown();
  }
  if (const auto* ch = root.section("channel")) {
    detail::SectionReader r(*ch, "channel", errors);
    r.enumeration("model", c.channel_model, parse_channel_model,
                  "one of \"rank_one\", \"rician\"");
    r.number("rician_k", c.rician_k);
    r.number("noise_variance_w", c.noise_variance_w);
    r.number("sigma2_hr", c.sigma2_hr);
    r.number("sigma2_he", c.sigma2_he);
    r.path_loss("path_loss_user", c.path_loss_user);
    r.path_loss("path_loss_eve", c.path_loss_eve);
    r.reject_unknown();
  }
  if (const auto* d = root.section("design")) {
    detail::SectionReader r(*d, "design", errors);
    SolverSettings& s = c.settings;
    r.number("target_rate_bits", c.target_rate_bits);
    r.enumeration("csi_mode", c.csi_mode, parse_csi_mode,
                  "one of \"full\", \"stat_eve\", \"stat_both\"");
    r.enumeration("solver", c.solver, parse_solver, "one of \"sdp\", \"pgd\"");
    r.number("pgd_eps", s.pgd_eps);
    r.integer("pgd_max_iters", s.pgd_max_iters);
    r.integer("pgd_restarts", s.pgd_restarts);
    r.number("sdp_tol", s.sdp_tol);
    r.integer("sdp_max_iters", s.sdp_max_iters);
    r.integer("rounding_draws", s.rounding_draws);
    r.number("outer_tol", s.outer_tol);
    r.integer("outer_max_iters", s.outer_max_iters);
    r.reject_unknown();
  }
  if (const auto* e = root.section("experiment")) {
    detail::SectionReader r(*e, "experiment", errors);
    r.integer("n_mc", c.n_mc);
    r.integer("n_trials", c.n_trials);
    r.unsigned64("seed", c.seed);
    r.pair("user_y_range", c.user_y_range);
    r.reject_unknown();
  }
  root.reject_unknown();

  if (errors.empty()) {
    for (auto& v : validate(c)) errors.push_back(std::move(v));
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return c;
}

/// Parses JSON text; whitespace-only text yields the defaults.
inline ScenarioConfig parse_config(const std::string& text) {
  if (std::all_of(text.begin(), text.end(),
                  [](unsigned char ch) { return std::isspace(ch); }))
    return config_from_json(nlohmann::json::object());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line = detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("config parse error at line " + std::to_string(line) + ": " +
                         e.what(),
                     line);
  }
  return config_from_json(doc);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline std::string dump_config(const ScenarioConfig& c) {
  return to_json(c).dump(2) + "\n";
}

}  // namespace irssec
