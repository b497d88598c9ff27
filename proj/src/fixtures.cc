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

#include "nashgap/fixtures.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nashgap/dynamics.h"
#include "nashgap/equilibrium.h"
#include "nashgap/mdp.h"

namespace nashgap {
namespace {

// Dense table builder; the joint index follows the game's indexer.
struct Tables {
  int num_states;
  int num_joint;
  int num_players;
  std::vector<double> transitions;
  std::vector<double> rewards;

  Tables(int ns, int nj, int np)
      : num_states(ns),
        num_joint(nj),
        num_players(np),
        transitions(static_cast<std::size_t>(ns) * nj * ns, 0.0),
        rewards(static_cast<std::size_t>(np) * ns * nj, 0.0) {}

  void go(int s, int a, int next) {
    transitions[(static_cast<std::size_t>(s) * num_joint + a) * num_states + next] = 1.0;
  }
  double& r(int player, int s, int a) {
    return rewards[(static_cast<std::size_t>(player) * num_states + s) * num_joint + a];
  }
};

std::vector<double> point_mass(int n, int at) {
  std::vector<double> d(n, 0.0);
  d[at] = 1.0;
  return d;
}

ExpectedQuantity eq(std::string label, double value, double tolerance = 1e-9) {
  return {std::move(label), value, Relation::kEqual, tolerance};
}
ExpectedQuantity at_least(std::string label, double value, double tolerance = 1e-6) {
  return {std::move(label), value, Relation::kAtLeast, tolerance};
}
ExpectedQuantity at_most(std::string label, double value, double tolerance = 1e-12) {
  return {std::move(label), value, Relation::kAtMost, tolerance};
}

int parse_player(const std::string& label, const std::string& prefix) {
  const std::size_t pos = prefix.size();
  if (label.size() <= pos) throw std::invalid_argument("bad fixture label: " + label);
  return std::stoi(label.substr(pos)) - 1;
}

const ProductPolicy& deviation_named(const Fixture& f, const std::string& label) {
  for (const auto& d : f.deviations) {
    if (d.label == label) return d.policy;
  }
  throw std::out_of_range("fixture " + f.name + " has no deviation '" + label + "'");
}

double compute(const Fixture& f, const std::string& label) {
  const MarkovGame& g = f.game;
  if (label == "eps_mu") return measure_errors(g, f.expert, f.learner).eps_mu;
  if (label == "eps_rho") return measure_errors(g, f.expert, f.learner).eps_rho;
  if (label == "bc_error") return bc_error(g, f.expert, f.learner);
  if (label == "nash_gap_learner") return nash_gap(g, f.learner);
  if (label == "expert_nash_gap") return verify_nash(g, f.expert).gap;
  if (label.rfind("expert_value_p", 0) == 0) {
    return initial_values(g, f.expert)[parse_player(label, "expert_value_p")];
  }
  if (label.rfind("learner_value_p", 0) == 0) {
    return initial_values(g, f.learner)[parse_player(label, "learner_value_p")];
  }
  if (label.rfind("deviation_value_p", 0) == 0) {
    const std::size_t colon = label.find(':');
    const int player = std::stoi(label.substr(17, colon - 17)) - 1;
    return initial_values(g, deviation_named(f, label.substr(colon + 1)))[player];
  }
  if (label.rfind("mu_expert:", 0) == 0) {
    return occupancy(g, f.expert).mu[f.state(label.substr(10))];
  }
  if (label.rfind("br_distance_p", 0) == 0) {
    const int player = parse_player(label, "br_distance_p");
    return br_distances(g, f.expert, f.learner, BrSelection::kFarthest)[player];
  }
  throw std::invalid_argument("unknown fixture quantity: " + label);
}

}  // namespace

std::optional<double> Fixture::expected_value(const std::string& label) const {
  for (const auto& e : expected) {
    if (e.label == label) return e.value;
  }
  return std::nullopt;
}

int Fixture::state(const std::string& label) const {
  for (const auto& s : states) {
    if (s.label == label) return s.index;
  }
  throw std::out_of_range("fixture " + name + " has no state '" + label + "'");
}

std::vector<FixtureCheck> check_fixture(const Fixture& fixture) {
  std::vector<FixtureCheck> out;
  for (const auto& e : fixture.expected) {
    FixtureCheck c{e, compute(fixture, e.label), false};
    switch (e.relation) {
      case Relation::kEqual:
        c.pass = std::abs(c.computed - e.value) <= e.tolerance;
        break;
      case Relation::kAtLeast:
        c.pass = c.computed >= e.value - e.tolerance;
        break;
      case Relation::kAtMost:
        c.pass = c.computed <= e.value + e.tolerance;
        break;
    }
    out.push_back(c);
  }
  return out;
}

Fixture figure1_game(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
  const std::vector<int> counts{2, 2};
  const JointActionIndexer idx(counts);
  Tables t(3, idx.num_joint(), 2);
  const double advance[3] = {1.0 / 3.0, 2.0 / 3.0, 1.0};
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < idx.num_joint(); ++a) {
      const bool both_first = idx.action_of(a, 0) == 0 && idx.action_of(a, 1) == 0;
      t.go(s, a, both_first ? (s + 1) % 3 : s);
      for (int i = 0; i < 2; ++i) t.r(i, s, a) = both_first ? advance[s] : -1.0;
    }
  }
  Fixture f;
  f.name = "figure1";
  f.game = make_valid_game(3, counts, std::move(t.transitions), std::move(t.rewards),
                           {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, gamma);
  const int expert_actions[2] = {0, 0};
  const int learner_actions[2] = {0, 1};
  f.expert = ProductPolicy::constant(3, counts, expert_actions);
  f.learner = ProductPolicy::constant(3, counts, learner_actions);
  f.deviations.push_back({"p2_plays_a1", f.learner.with_player_from(1, f.expert)});
  f.states = {{"s0", 0}, {"s1", 1}, {"s2", 2}};

  const double h = 1.0 / (1.0 - gamma);
  // Expert cycle: the uniform average of the three cyclic values is (2/3) h.
  f.expected = {
      eq("eps_mu", 0.0, 1e-10),
      eq("expert_nash_gap", 0.0, 1e-8),
      eq("expert_value_p2", (2.0 / 3.0) * h, 1e-8),
      eq("learner_value_p2", -h, 1e-8),
      eq("deviation_value_p2:p2_plays_a1", (2.0 / 3.0) * h, 1e-8),
      at_least("nash_gap_learner", (5.0 / 3.0) * h),
  };
  return f;
}

Fixture unvisited_state_game(double gamma, int chain_pairs) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
  if (chain_pairs < 2) throw std::invalid_argument("chain_pairs must be >= 2");
  // State index equals the state's subscript: s0, odd s1..s_{2K-1}, even
  // s2..s_{2K}. The last odd and even states absorb.
  const int last = 2 * chain_pairs;
  const int ns = last + 1;
  const std::vector<int> counts{3, 3};
  const JointActionIndexer idx(counts);
  Tables t(ns, idx.num_joint(), 2);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < idx.num_joint(); ++a) {
      const bool branch = idx.action_of(a, 0) == 1 && idx.action_of(a, 1) == 0;
      int next = s + 2 <= last ? s + 2 : s;
      if (s == 0) next = branch ? 1 : 2;
      if (s == 1) next = branch ? 3 : 4;
      t.go(s, a, next);
      for (int i = 0; i < 2; ++i) t.r(i, s, a) = (s % 2 == 1) ? 1.0 : 0.0;
    }
  }
  Fixture f;
  f.name = "unvisited-state";
  f.game = make_valid_game(ns, counts, std::move(t.transitions), std::move(t.rewards),
                           point_mass(ns, 0), gamma);
  std::vector<std::vector<int>> expert(2, std::vector<int>(ns, 0));
  expert[0][1] = 2;
  expert[1][1] = 2;
  f.expert = ProductPolicy::deterministic(ns, counts, expert);
  f.learner = ProductPolicy::constant(ns, counts, std::vector<int>{0, 0});
  std::vector<std::vector<int>> deviation(2, std::vector<int>(ns, 0));
  deviation[0][0] = 1;
  deviation[0][1] = 1;
  f.deviations.push_back(
      {"p1_plays_a2", f.learner.with_player_from(
                          0, ProductPolicy::deterministic(ns, counts, deviation))});
  f.states = {{"s0", 0}, {"s1", 1}, {"s2", 2}};

  const double h = 1.0 / (1.0 - gamma);
  f.expected = {
      eq("eps_rho", 0.0, 0.0),
      eq("learner_value_p1", 0.0, 1e-10),
      eq("expert_value_p1", 0.0, 1e-10),
      eq("deviation_value_p1:p1_plays_a2", gamma * h, 1e-8),
      at_least("nash_gap_learner", h - 1.0),
      // Player 1 at s0 can still reach s1 against the expert; the expert's
      // own best-response gain is gamma, not 0.
      eq("expert_nash_gap", gamma, 1e-8),
  };
  f.notes.push_back(
      "expert is not an equilibrium: player 1 deviating to a2 at s0 reaches s1 (gain gamma)");
  return f;
}

namespace {

int raw_chain_length(double epsilon, double gamma) {
  if (!(epsilon > 0.0 && epsilon < 2.0)) throw std::invalid_argument("epsilon must be in (0, 2)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
  return static_cast<int>(std::ceil(std::log((epsilon / 2.0) * (1.0 - gamma)) / std::log(gamma)));
}

}  // namespace

int chain_trap_length(double epsilon, double gamma) {
  return std::max(raw_chain_length(epsilon, gamma), 1);
}

Fixture chain_trap_game(double epsilon, double gamma) {
  const int raw_k = raw_chain_length(epsilon, gamma);
  const int k = std::max(raw_k, 1);
  const int ns = k + 2;
  const int s_exp = k + 1;
  const std::vector<int> counts{2, 2};
  const JointActionIndexer idx(counts);
  Tables t(ns, idx.num_joint(), 2);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < idx.num_joint(); ++a) {
      const int a1 = idx.action_of(a, 0);
      const int a2 = idx.action_of(a, 1);
      if (s == 0) {
        t.go(s, a, a1 == 0 ? 1 : s_exp);
      } else if (s < s_exp) {
        t.go(s, a, s + 1);
      } else {
        t.go(s, a, s_exp);
        t.r(0, s, a) = a2 == 0 ? 1.0 : -1.0;
        t.r(1, s, a) = a2 == 1 ? 1.0 : 0.0;
      }
    }
  }
  Fixture f;
  f.name = "chain-trap";
  f.game = make_valid_game(ns, counts, std::move(t.transitions), std::move(t.rewards),
                           point_mass(ns, 0), gamma);
  f.expert = ProductPolicy::constant(ns, counts, std::vector<int>{0, 1});
  std::vector<std::vector<int>> learner(2, std::vector<int>(ns, 0));
  learner[1].assign(ns, 1);
  learner[1][s_exp] = 0;
  f.learner = ProductPolicy::deterministic(ns, counts, learner);
  f.states = {{"s0", 0}, {"s_exp", s_exp}};
  if (raw_k < 1) f.notes.push_back("chain length clamped to 1");

  const double mu_exp = std::pow(gamma, k + 1);
  f.expected = {
      eq("expert_nash_gap", 0.0, 1e-8),
      eq("mu_expert:s_exp", mu_exp, 1e-12),
      at_most("mu_expert:s_exp", epsilon / 2.0),
      eq("bc_error", 2.0 * mu_exp, 1e-12),
      at_most("bc_error", epsilon),
      eq("br_distance_p1", 2.0, 1e-9),
  };
  return f;
}

Fixture dse_game(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
  const std::vector<int> counts{2, 2};
  const JointActionIndexer idx(counts);
  Tables t(2, idx.num_joint(), 2);
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < idx.num_joint(); ++a) {
      const int a1 = idx.action_of(a, 0);
      const int a2 = idx.action_of(a, 1);
      t.go(s, a, a1 == a2 ? s : 1 - s);
      t.r(0, s, a) = a1 == 0 ? 1.0 : 0.0;
      t.r(1, s, a) = a2 == 0 ? 1.0 : 0.0;
    }
  }
  Fixture f;
  f.name = "dse";
  f.game = make_valid_game(2, counts, std::move(t.transitions), std::move(t.rewards),
                           {0.5, 0.5}, gamma);
  f.expert = ProductPolicy::constant(2, counts, std::vector<int>{0, 0});
  f.learner = ProductPolicy::uniform(2, counts);
  f.states = {{"s0", 0}, {"s1", 1}};
  const double h = 1.0 / (1.0 - gamma);
  f.expected = {
      eq("expert_nash_gap", 0.0, 1e-8),
      eq("expert_value_p1", h, 1e-8),
      eq("expert_value_p2", h, 1e-8),
      eq("learner_value_p1", 0.5 * h, 1e-8),
      eq("nash_gap_learner", 0.5 * h, 1e-8),
      eq("br_distance_p1", 0.0, 1e-12),
      eq("br_distance_p2", 0.0, 1e-12),
  };
  return f;
}

int tag_state_index(const TagState& st) {
  return ((st.tagger - 1) * 6 + st.pos1) * 6 + st.pos2;
}

TagState tag_state_of(int index) {
  return {(index / 6) % 6, index % 6, index / 36 + 1};
}

MarkovGame tag_game(double gamma) {
  constexpr int kRows = 2;
  constexpr int kCols = 3;
  constexpr int kStates = 72;
  // up, down, left, right
  constexpr int kDr[4] = {-1, 1, 0, 0};
  constexpr int kDc[4] = {0, 0, -1, 1};
  const std::vector<int> counts{4, 4};
  const JointActionIndexer idx(counts);
  Tables t(kStates, idx.num_joint(), 2);

  auto move = [&](int pos, int dir, bool& off_grid) {
    const int r = pos / kCols + kDr[dir];
    const int c = pos % kCols + kDc[dir];
    off_grid = r < 0 || r >= kRows || c < 0 || c >= kCols;
    return off_grid ? pos : r * kCols + c;
  };

  for (int s = 0; s < kStates; ++s) {
    const TagState st = tag_state_of(s);
    for (int a = 0; a < idx.num_joint(); ++a) {
      bool off1 = false;
      bool off2 = false;
      const int p1 = move(st.pos1, idx.action_of(a, 0), off1);
      const int p2 = move(st.pos2, idx.action_of(a, 1), off2);
      const int tagger = p1 == p2 ? 3 - st.tagger : st.tagger;
      t.go(s, a, tag_state_index({p1, p2, tagger}));
      double r1 = st.tagger == 1 ? -1.0 : 1.0;
      if (off1) r1 -= 0.5;
      if (off2) r1 += 0.5;
      t.r(0, s, a) = 0.5 * r1;
      t.r(1, s, a) = -0.5 * r1;
    }
  }
  std::vector<double> nu0(kStates, 0.0);
  nu0[tag_state_index({0, 5, 1})] = 0.5;
  nu0[tag_state_index({0, 2, 1})] = 0.5;
  return make_valid_game(kStates, counts, std::move(t.transitions), std::move(t.rewards),
                         std::move(nu0), gamma);
}

Fixture fixture_by_name(const std::string& name, double gamma, double epsilon,
                        int chain_pairs) {
  if (name == "figure1") return figure1_game(gamma);
  if (name == "unvisited-state") return unvisited_state_game(gamma, chain_pairs);
  if (name == "chain-trap") return chain_trap_game(epsilon, gamma);
  if (name == "dse") return dse_game(gamma);
  throw std::invalid_argument("unknown fixture '" + name +
                              "' (expected figure1, unvisited-state, chain-trap, dse)");
}

}  // namespace nashgap
