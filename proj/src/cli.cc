// Copyright 2026 The Nashgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nashgap/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nashgap/bimatrix.h"
#include "nashgap/dynamics.h"
#include "nashgap/equilibrium.h"
#include "nashgap/experiments.h"
#include "nashgap/fixtures.h"
#include "nashgap/game.h"
#include "nashgap/game_io.h"
#include "nashgap/regularized.h"

namespace nashgap::cli {
namespace {

// Usage problems detected after flag parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string set_string(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
  return out + "}";
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::kEqual:
      return "==";
    case Relation::kAtLeast:
      return ">=";
    case Relation::kAtMost:
      return "<=";
  }
  return "?";
}

void write_output(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path == "-") {
    out << contents;
  } else {
    write_file(path, contents);
  }
}

struct FixtureArgs {
  std::string name;
  std::optional<double> gamma;
  double epsilon = 0.1;
  int chain_pairs = 5;
  std::string export_path;
  std::string expert_path;
  std::string learner_path;
};

int cmd_fixture(const FixtureArgs& a, std::ostream& out, std::ostream& err) {
  if (a.name == "tag") {
    const MarkovGame g = tag_game(a.gamma.value_or(0.8));
    out << "fixture tag\n"
        << "states " << g.num_states() << "\n"
        << "actions " << g.num_actions(0) << "x" << g.num_actions(1) << "\n"
        << "gamma " << num(g.gamma()) << "\n"
        << "zero_sum " << (g.is_zero_sum() ? "true" : "false") << "\n";
    if (!a.export_path.empty()) write_file(a.export_path, save_game(g));
    return kOk;
  }
  const Fixture f = fixture_by_name(a.name, a.gamma.value_or(0.9), a.epsilon, a.chain_pairs);
  if (!a.export_path.empty()) write_file(a.export_path, save_game(f.game));
  if (!a.expert_path.empty()) write_file(a.expert_path, save_policy(f.expert));
  if (!a.learner_path.empty()) write_file(a.learner_path, save_policy(f.learner));
  for (const auto& note : f.notes) err << "note: " << note << "\n";

  const auto checks = check_fixture(f);
  out << "fixture " << f.name << " (gamma " << num(f.game.gamma()) << ", " << f.game.num_states()
      << " states)\n";
  std::size_t width = 8;
  for (const auto& c : checks) width = std::max(width, c.expected.label.size());
  bool all = true;
  for (const auto& c : checks) {
    std::string label = c.expected.label;
    label.resize(width, ' ');
    out << label << "  " << relation_name(c.expected.relation) << ' ' << num(c.expected.value)
        << "  computed " << num(c.computed) << "  " << (c.pass ? "ok" : "FAIL") << "\n";
    all = all && c.pass;
  }
  return all ? kOk : kAssertion;
}

MarkovGame load_game_file(const std::string& path) { return load_game(read_file(path)); }

ProductPolicy load_policy_for(const MarkovGame& g, const std::string& path) {
  ProductPolicy p = load_policy(read_file(path));
  if (!p.compatible_with(g)) {
    throw UsageError("policy shape does not match the game (" + path + ")");
  }
  return p;
}

int cmd_nash_gap(const std::string& game_path, const std::string& policy_path,
                 std::ostream& out) {
  const MarkovGame g = load_game_file(game_path);
  const ProductPolicy p = load_policy_for(g, policy_path);
  const NashCheck check = verify_nash(g, p);
  out << "nash_gap " << num(check.gap) << "\n";
  for (std::size_t i = 0; i < check.gains.size(); ++i) {
    out << "gain_p" << i + 1 << " " << num(check.gains[i]) << "\n";
  }
  return kOk;
}

int cmd_best_response(const std::string& game_path, const std::string& policy_path, int player,
                      const std::string& out_path, std::ostream& out) {
  const MarkovGame g = load_game_file(game_path);
  const ProductPolicy p = load_policy_for(g, policy_path);
  if (player < 1 || player > g.num_players()) {
    throw UsageError("--player must be in 1.." + std::to_string(g.num_players()));
  }
  const BestResponseResult br = best_response(g, p, player - 1);
  out << "value " << num(br.value) << "\n";
  out << "current_value " << num(initial_values(g, p)[player - 1]) << "\n";
  out << "actions";
  for (int a : br.actions) out << ' ' << a;
  out << "\n";
  if (!out_path.empty()) {
    const int na = g.num_actions(player - 1);
    std::vector<double> table(static_cast<std::size_t>(g.num_states()) * na, 0.0);
    for (int s = 0; s < g.num_states(); ++s) table[static_cast<std::size_t>(s) * na + br.actions[s]] = 1.0;
    write_file(out_path, save_policy(p.with_player(player - 1, std::move(table))));
  }
  return kOk;
}

int cmd_solve_zs(const std::string& game_path, double tau, const std::string& out_path,
                 std::ostream& out) {
  const MarkovGame g = load_game_file(game_path);
  if (g.num_players() != 2 || !g.is_zero_sum()) {
    throw UsageError("solve-zs needs a two-player zero-sum game");
  }
  if (!(tau > 0.0)) throw UsageError("--tau must be positive");
  const RegularizedNash eq = regularized_nash_vi(g, tau);
  out << "sweeps " << eq.sweeps << "\n"
      << "outer_residual " << num(eq.outer_residual) << "\n"
      << "stage_residual " << num(eq.stage_residual) << "\n"
      << "nash_gap " << num(nash_gap(g, eq.policy)) << "\n";
  write_output(out_path, save_policy(eq.policy), out);
  return kOk;
}

int cmd_support_recover(const std::string& path, double eps, double grid_step,
                        std::ostream& out, std::ostream& err) {
  const BimatrixGame game = load_bimatrix(read_file(path));
  if (!(eps > 0.0)) throw UsageError("--eps must be positive");
  if (game.rows != 2 || game.cols != 2) {
    throw UsageError("the brute-force oracle supports 2x2 games only");
  }
  const SupportRecoveryResult r = support_recovery(game, eps, grid_step);
  out << "nu1 " << set_string(r.nu1) << "\n";
  out << "nu2 " << set_string(r.nu2) << "\n";
  out << "delta " << num(r.delta) << "  K " << num(r.k) << "  baseline " << num(r.baseline)
      << "\n";
  for (const auto& call : r.log) {
    if (call.player == 0) continue;
    out << "query p" << call.player << " action " << call.action << " bound " << num(call.bound)
        << (call.included ? " include" : " drop") << (call.near_threshold ? " (near)" : "")
        << "\n";
  }
  if (!r.ok()) {
    err << "support recovery failed: empty support\n";
    return kSolver;
  }
  const auto check = bimatrix_support_solve(game, r.nu1, r.nu2, eps);
  out << "resolve " << (check.feasible ? "feasible" : "infeasible") << "\n";
  return kOk;
}

int cmd_m_rho(const std::string& path, double eps, double grid_step, std::ostream& out) {
  const BimatrixGame game = load_bimatrix(read_file(path));
  if (game.rows != 2 || game.cols != 2) {
    throw UsageError("the brute-force oracle supports 2x2 games only");
  }
  if (!(grid_step > 0.0 && grid_step <= 0.1)) throw UsageError("--grid-step must be in (0, 0.1]");
  if (!(eps >= 0.0)) throw UsageError("--eps must be >= 0");
  out << "m_rho " << num(m_rho_bruteforce(game, eps, grid_step)) << "\n";
  return kOk;
}

struct ResolvedExperiment {
  MarkovGame game;
  std::optional<ProductPolicy> fixture_expert;
};

ResolvedExperiment resolve_game(const ExperimentConfig& c) {
  ResolvedExperiment r;
  if (c.game == "tag") {
    r.game = tag_game(c.gamma.value_or(0.8));
  } else if (c.game == "figure1" || c.game == "unvisited-state" || c.game == "chain-trap" ||
             c.game == "dse") {
    Fixture f = fixture_by_name(c.game, c.gamma.value_or(0.9), 0.1, 5);
    r.game = std::move(f.game);
    r.fixture_expert = std::move(f.expert);
  } else {
    r.game = load_game_file(c.game);
    if (c.gamma) {
      r.game = make_valid_game(r.game.num_states(), r.game.action_counts(),
                               r.game.transitions(), r.game.rewards(),
                               {r.game.initial_dist().begin(), r.game.initial_dist().end()},
                               *c.gamma);
    }
  }
  return r;
}

int cmd_experiment(const std::string& kind, const std::string& config_path, std::ostream& out,
                   std::ostream& err) {
  const ExperimentConfig c = parse_experiment_config(read_file(config_path));
  if (c.output.empty()) throw UsageError("config needs an 'output' path");
  const ResolvedExperiment r = resolve_game(c);
  const auto noise = linspace(c.noise_min, c.noise_max, c.noise_count);

  if (kind == "bound-validation") {
    ProductPolicy expert;
    if (r.fixture_expert) {
      expert = *r.fixture_expert;
    } else {
      const RegularizedNash eq = regularized_nash_vi(r.game, c.tau);
      expert = eq.policy;
      err << "regularized equilibrium: " << eq.sweeps << " sweeps, residual "
          << num(eq.outer_residual) << "\n";
    }
    const BoundValidationRun run =
        bound_validation_run(r.game, expert, noise, c.seeds, {c.episodes, c.mode, c.tau});
    write_output(c.output, records_csv(run.records), out);
    if (!c.delta_output.empty()) write_output(c.delta_output, delta_csv(c.tau, run.delta), out);
    int violations = 0;
    for (const auto& rec : run.records) {
      if (!rec.failed && rec.nash_gap > rec.bound_value + 1e-9) ++violations;
    }
    err << run.records.size() << " records, " << run.failures << " failed, " << violations
        << " bound violations\n";
    return run.failures > 0 ? kSolver : kOk;
  }
  if (kind == "temperature-sweep") {
    const std::vector<double> taus = c.taus.empty() ? std::vector<double>{c.tau} : c.taus;
    std::vector<double> grid;
    if (c.eps_grid_max > 0.0) grid = linspace(c.eps_grid_min, c.eps_grid_max, c.eps_grid_count);
    const SweepResult sweep =
        temperature_sweep(r.game, taus, noise, c.seeds, grid, {c.episodes, c.mode});
    write_output(c.output, curves_csv(sweep.eps_grid, sweep.curves), out);
    int failed = 0;
    for (const auto& tc : sweep.curves) {
      if (tc.failed) {
        ++failed;
        err << "tau " << num(tc.tau) << " failed: " << tc.error << "\n";
      } else {
        err << "tau " << num(tc.tau) << ": expert nash gap " << num(tc.expert_nash_gap) << "\n";
      }
    }
    return failed > 0 ? kSolver : kOk;
  }
  throw UsageError("unknown experiment '" + kind +
                   "' (expected bound-validation or temperature-sweep)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash-gap toolkit for tabular Markov games"};
  app.require_subcommand(1);

  FixtureArgs fx;
  double gamma_flag = 0.0;
  auto* fixture = app.add_subcommand("fixture", "Build a named construction and check its claims");
  fixture->add_option("name", fx.name, "figure1, unvisited-state, chain-trap, dse or tag")
      ->required();
  fixture->add_option("--gamma", gamma_flag, "Discount factor (default 0.9, tag 0.8)");
  fixture->add_option("--epsilon", fx.epsilon, "Target BC error for chain-trap")
      ->capture_default_str();
  fixture->add_option("--chain-pairs", fx.chain_pairs, "Branch pairs for unvisited-state")
      ->capture_default_str();
  fixture->add_option("--export", fx.export_path, "Write the game file here");
  fixture->add_option("--expert-out", fx.expert_path, "Write the expert policy here");
  fixture->add_option("--learner-out", fx.learner_path, "Write the learner policy here");

  std::string game_path, policy_path, out_path, bimatrix_path, config_path, kind;
  int player = 1;
  double tau = 0.1, eps = 0.0, grid_step = 0.005;

  auto* gap = app.add_subcommand("nash-gap", "Nash gap of a product policy");
  gap->add_option("--game", game_path, "Game file")->required();
  gap->add_option("--policy", policy_path, "Policy file")->required();

  auto* br = app.add_subcommand("best-response", "Best response of one player");
  br->add_option("--game", game_path, "Game file")->required();
  br->add_option("--policy", policy_path, "Policy file")->required();
  br->add_option("--player", player, "Player index, 1-based")->required();
  br->add_option("--out", out_path, "Write the policy with the response substituted");

  auto* zs = app.add_subcommand("solve-zs", "Entropy-regularized Nash value iteration");
  zs->add_option("--game", game_path, "Two-player zero-sum game file")->required();
  zs->add_option("--tau", tau, "Entropy temperature")->required();
  zs->add_option("--out", out_path, "Policy file to write ('-' for stdout)")
      ->default_val("-");

  auto* sr = app.add_subcommand("support-recover", "Support recovery from the m_rho oracle");
  sr->add_option("--bimatrix", bimatrix_path, "Bimatrix file")->required();
  sr->add_option("--eps", eps, "Target Nash precision")->required();
  sr->add_option("--grid-step", grid_step, "Oracle grid step")->capture_default_str();

  auto* mr = app.add_subcommand("m-rho", "Brute-force m_rho on a 2x2 game");
  mr->add_option("--bimatrix", bimatrix_path, "Bimatrix file")->required();
  mr->add_option("--eps", eps, "Occupancy error eps_rho")->required();
  mr->add_option("--grid-step", grid_step, "Grid step")->required();

  auto* ex = app.add_subcommand("experiment", "Perturbation experiments");
  ex->add_option("kind", kind, "bound-validation or temperature-sweep")
      ->required()
      ->check(CLI::IsMember({"bound-validation", "temperature-sweep"}));
  ex->add_option("--config", config_path, "Experiment config file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (fixture->parsed()) {
      if (fixture->count("--gamma") > 0) fx.gamma = gamma_flag;
      return cmd_fixture(fx, out, err);
    }
    if (gap->parsed()) return cmd_nash_gap(game_path, policy_path, out);
    if (br->parsed()) return cmd_best_response(game_path, policy_path, player, out_path, out);
    if (zs->parsed()) return cmd_solve_zs(game_path, tau, out_path, out);
    if (sr->parsed()) return cmd_support_recover(bimatrix_path, eps, grid_step, out, err);
    if (mr->parsed()) return cmd_m_rho(bimatrix_path, eps, grid_step, out);
    if (ex->parsed()) return cmd_experiment(kind, config_path, out, err);
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace nashgap::cli
