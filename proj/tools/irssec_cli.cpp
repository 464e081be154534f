// SPDX-License-Identifier: Apache-2.0
//
// irssec: batch experiments for minimum-power secure IRS designs.
//
//   irssec sweep-rate      [--rates 8,9,...]   mean power vs target rate
//   irssec sweep-distance  [--positions ...]   mean power vs user y
//   irssec oracle-compare                      solvers vs grid search, N <= 4
//   irssec solve                               one instance, JSON on stdout
//
// Exit codes: 0 success, 1 infeasible-dominated run, 2 error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irssec/irssec.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> solver;
  std::optional<std::string> channel;
  std::optional<std::string> csi;
  std::optional<double> rate;
  std::optional<int> antennas;
  std::optional<int> elements;
  std::string out;
};

irssec::ScenarioConfig resolve_config(const Overrides& o) {
  using namespace irssec;
  ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
  std::vector<std::string> bad;
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.n_trials = *o.trials;
  if (o.rate) cfg.target_rate_bits = *o.rate;
  if (o.antennas) cfg.num_antennas = *o.antennas;
  if (o.elements) cfg.num_elements = *o.elements;
  if (o.solver) {
    if (auto s = parse_solver(*o.solver)) cfg.solver = *s;
    else bad.push_back("--solver: expected sdp or pgd");
  }
  if (o.channel) {
    if (auto c = parse_channel_model(*o.channel)) cfg.channel_model = *c;
    else bad.push_back("--channel: expected rank_one or rician");
  }
  if (o.csi) {
    if (auto c = parse_csi_mode(*o.csi)) cfg.csi_mode = *c;
    else bad.push_back("--csi: expected full, stat_eve or stat_both");
  }
  auto v = validate(cfg);
  bad.insert(bad.end(), v.begin(), v.end());
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return cfg;
}

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") std::cout << text;
  else irssec::write_text(text, out);
}

int sweep_exit(const irssec::SweepResult& r) {
  for (const auto& row : r.rows)
    if (row.feasibility_rate < 0.5) return 1;
  return 0;
}

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON scenario file")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output path (stdout if omitted)");
  sub->add_option("--trials", o.trials, "channel draws per point");
  sub->add_option("--solver", o.solver, "phase solver: sdp | pgd");
  sub->add_option("--channel", o.channel, "AP-IRS model: rank_one | rician");
  sub->add_option("--csi", o.csi, "full | stat_eve | stat_both");
  sub->add_option("--rate", o.rate, "target secrecy rate, bits/s/Hz");
  sub->add_option("--antennas", o.antennas, "AP antennas M");
  sub->add_option("--elements", o.elements, "IRS elements N");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-power secure transmit design for IRS-assisted MISO links"};
  app.require_subcommand(1);
  Overrides o;

  std::vector<double> rates{8, 9, 10, 11, 12, 13, 14, 15};
  auto* rate_cmd = app.add_subcommand("sweep-rate", "mean required power per target rate");
  add_common(rate_cmd, o);
  rate_cmd->add_option("--rates", rates, "ascending target rates")->delimiter(',');

  std::vector<double> positions;
  for (int y = 50; y <= 150; y += 10) positions.push_back(y);
  auto* dist_cmd = app.add_subcommand("sweep-distance", "mean required power per user y");
  add_common(dist_cmd, o);
  dist_cmd->add_option("--positions", positions, "user y coordinates in m")->delimiter(',');

  int grid_levels = 128;
  auto* oracle_cmd = app.add_subcommand("oracle-compare", "SDP and PGD against grid search");
  add_common(oracle_cmd, o);
  oracle_cmd->add_option("--grid-levels", grid_levels, "phase levels per element")
      ->check(CLI::Range(1, 128));

  auto* solve_cmd = app.add_subcommand("solve", "one channel draw, DesignResult as JSON");
  add_common(solve_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (oracle_cmd->parsed() && !o.elements) o.elements = 3;
    const irssec::ScenarioConfig cfg = resolve_config(o);

    if (rate_cmd->parsed()) {
      const auto r = irssec::sweep_rate(cfg, rates);
      write_or_print(irssec::sweep_csv(r), o.out);
      return sweep_exit(r);
    }
    if (dist_cmd->parsed()) {
      const auto r = irssec::sweep_distance(cfg, positions);
      write_or_print(irssec::sweep_csv(r), o.out);
      return sweep_exit(r);
    }
    if (oracle_cmd->parsed()) {
      const auto r = irssec::oracle_compare(cfg, grid_levels);
      write_or_print(irssec::oracle_csv(r), o.out);
      std::cerr << "median sdp gap " << r.median_sdp_gap << ", median pgd gap "
                << r.median_pgd_gap << ", min gap " << r.min_gap << "\n";
      return 0;
    }
    irssec::Rng rng(cfg.seed);
    const auto ch = irssec::sample_channels(cfg, rng);
    const auto d = irssec::run_design(cfg, ch, cfg.target_rate_bits,
                                      irssec::derive_seed(cfg.seed, irssec::kSolverStream));
    const auto v = irssec::verify_design(ch, d, cfg.target_rate_bits, cfg.noise_variance_w);
    write_or_print(irssec::to_json(d, v).dump(2) + "\n", o.out);
    return d.feasible() ? 0 : 1;
  } catch (const irssec::ValidationError& e) {
    std::cerr << "error: invalid configuration\n";
    for (const auto& s : e.violations()) std::cerr << "  " << s << "\n";
    return 2;
  } catch (const irssec::ParseError& e) {
    std::cerr << "error: " << e.what() << " (line " << e.line() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
