// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "irssec/experiments.hpp"

using namespace irssec;
using Catch::Matchers::WithinRel;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.num_antennas = 4;
  c.num_elements = 4;
  c.n_trials = 4;
  c.seed = 11;
  c.target_rate_bits = 8.0;
  return c;
}

std::string scratch(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("irssec_test_exp_" + name)).string();
}

}  // namespace

TEST_CASE("format_double round-trips", "[experiments]") {
  for (double v : {0.0, -0.0, 1e-300, 0.1 + 0.2, 123456.789, -2.5e-11})
    CHECK(parse_double(format_double(v)) == v);
  CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
  CHECK_THROWS_AS(parse_double("1.0x"), ParseError);
  CHECK_THROWS_AS(parse_double(""), ParseError);
}

TEST_CASE("sweep_rate is deterministic and monotone", "[experiments]") {
  const ScenarioConfig cfg = small_config();
  const std::vector<double> rates{6.0, 7.0, 8.0};
  const SweepResult a = sweep_rate(cfg, rates);
  const SweepResult b = sweep_rate(cfg, rates);
  REQUIRE(a.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.rows[i].x == rates[i]);
    CHECK(a.rows[i].mean_power_w == b.rows[i].mean_power_w);
    CHECK(a.rows[i].trial_power_w.size() == 4);
    CHECK(a.rows[i].feasibility_rate >= 0.0);
    CHECK(a.rows[i].feasibility_rate <= 1.0);
  }
  REQUIRE(a.rows[0].feasibility_rate == 1.0);
  CHECK(a.rows[1].mean_power_w > a.rows[0].mean_power_w);
  CHECK(a.rows[2].mean_power_w > a.rows[1].mean_power_w);

  CHECK_THROWS_AS(sweep_rate(cfg, {}), PreconditionError);
  CHECK_THROWS_AS(sweep_rate(cfg, {8.0, 7.0}), PreconditionError);
  CHECK_THROWS_AS(sweep_rate(cfg, {0.0}), PreconditionError);
  ScenarioConfig bad = cfg;
  bad.n_trials = 0;
  CHECK_THROWS_AS(sweep_rate(bad, {8.0}), ValidationError);
}

TEST_CASE("colocated eavesdropper gives zero feasibility and NaN power", "[experiments]") {
  ScenarioConfig cfg = small_config();
  cfg.n_trials = 2;
  cfg.user_y_range = {120.0, 120.0};
  cfg.channel_model = ChannelModel::RankOne;
  cfg.csi_mode = CsiMode::StatBoth;
  const SweepResult r = sweep_rate(cfg, {1.0});
  CHECK(r.rows[0].feasibility_rate == 0.0);
  CHECK(std::isnan(r.rows[0].mean_power_w));
}

TEST_CASE("sweep_distance symmetry about the IRS", "[experiments]") {
  ScenarioConfig cfg = small_config();
  cfg.channel_model = ChannelModel::RankOne;
  const double y0 = cfg.irs_position.y;
  const std::vector<double> offsets{5.0, 10.0, 20.0, 40.0};
  std::vector<double> ys{y0};
  for (double d : offsets) {
    ys.push_back(y0 - d);
    ys.push_back(y0 + d);
  }
  const SweepResult r = sweep_distance(cfg, ys);
  REQUIRE(r.rows.size() == ys.size());
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].x > r.rows[i - 1].x);

  auto power_at = [&](double y) {
    for (const auto& row : r.rows)
      if (row.x == y) return row.mean_power_w;
    FAIL("missing position");
    return 0.0;
  };
  double prev = power_at(y0);
  for (double d : offsets) {
    const double lo = power_at(y0 - d);
    const double hi = power_at(y0 + d);
    CHECK_THAT(lo, WithinRel(hi, 1e-9));
    CHECK(lo > prev);
    prev = lo;
  }
  CHECK_THROWS_AS(sweep_distance(cfg, {}), PreconditionError);
  CHECK_THROWS_AS(sweep_distance(cfg, {std::nan("")}), PreconditionError);
}

TEST_CASE("sweep CSV round-trip", "[experiments]") {
  const SweepResult r = sweep_rate(small_config(), {7.0, 8.0});
  const std::string text = sweep_csv(r);
  CHECK(text.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(std::string(kSweepCsvHeader) ==
        "x,mean_power_w,power_std,feasibility_rate,mean_iterations");

  const std::string path = scratch("sweep.csv");
  emit_csv(r, path);
  const SweepResult back = read_sweep_csv(path);
  REQUIRE(back.rows.size() == r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(back.rows[i].x == r.rows[i].x);
    CHECK(back.rows[i].mean_power_w == r.rows[i].mean_power_w);
    CHECK(back.rows[i].power_std == r.rows[i].power_std);
    CHECK(back.rows[i].feasibility_rate == r.rows[i].feasibility_rate);
    CHECK(back.rows[i].mean_iterations == r.rows[i].mean_iterations);
  }

  write_text("x,y\n1,2\n", path);
  CHECK_THROWS_AS(read_sweep_csv(path), ParseError);
  write_text(std::string(kSweepCsvHeader) + "\n1,2,3\n", path);
  try {
    read_sweep_csv(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_sweep_csv(path), IoError);
}

TEST_CASE("write_text to an unwritable path", "[experiments]") {
  CHECK_THROWS_AS(write_text("x", scratch("no_such_dir") + "/out.csv"), IoError);
}

TEST_CASE("oracle_compare", "[experiments]") {
  ScenarioConfig cfg = small_config();
  cfg.num_elements = 3;
  cfg.n_trials = 6;
  const OracleReport a = oracle_compare(cfg, 64);
  const OracleReport b = oracle_compare(cfg, 64);
  REQUIRE(a.rows.size() == 6);
  // one grid step of phase error costs at most this relative objective
  const double resolution = 1e-3;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const OracleRow& r = a.rows[i];
    CHECK(r.trial == static_cast<int>(i));
    CHECK(r.sdp_gap >= -resolution);
    CHECK(r.pgd_gap >= -resolution);
    CHECK(r.sdp_upper_bound + 1e-6 * std::abs(r.oracle_objective) >= r.oracle_objective);
    CHECK(r.sdp_objective == b.rows[i].sdp_objective);
    CHECK(r.pgd_objective == b.rows[i].pgd_objective);
  }
  CHECK(a.median_sdp_gap < 1e-3);
  CHECK(a.median_pgd_gap < 1e-3);
  CHECK(a.min_gap >= -resolution);

  const std::string csv = oracle_csv(a);
  CHECK(csv.rfind(std::string(kOracleCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  cfg.num_elements = 5;
  CHECK_THROWS_AS(oracle_compare(cfg), TooLarge);
}

TEST_CASE("design JSON carries the verification", "[experiments]") {
  ScenarioConfig cfg = small_config();
  Rng rng(cfg.seed);
  const ChannelSet ch = sample_channels(cfg, rng);
  const DesignResult d = run_design(cfg, ch, cfg.target_rate_bits, 5);
  const VerificationReport v = verify_design(ch, d, cfg.target_rate_bits, cfg.noise_variance_w);
  const nlohmann::json j = to_json(d, v);
  CHECK(j.contains("power_w"));
  CHECK(j["omega"].size() == 4);
}
