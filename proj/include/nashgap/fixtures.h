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

#ifndef NASHGAP_FIXTURES_H_
#define NASHGAP_FIXTURES_H_

#include <optional>
#include <string>
#include <vector>

#include "nashgap/game.h"

namespace nashgap {

struct NamedPolicy {
  std::string label;
  ProductPolicy policy;
};

enum class Relation { kEqual, kAtLeast, kAtMost };

// A closed-form claim about the fixture. Labels understood by check_fixture:
//   eps_mu, eps_rho, bc_error, nash_gap_learner, expert_nash_gap,
//   expert_value_p<i>, learner_value_p<i>, deviation_value_p<i>:<deviation>,
//   mu_expert:<state>, br_distance_p<i>.
struct ExpectedQuantity {
  std::string label;
  double value = 0.0;
  Relation relation = Relation::kEqual;
  double tolerance = 1e-9;
};

struct FixtureCheck {
  ExpectedQuantity expected;
  double computed = 0.0;
  bool pass = false;
};

struct NamedState {
  std::string label;
  int index = 0;
};

struct Fixture {
  std::string name;
  MarkovGame game;
  ProductPolicy expert;
  ProductPolicy learner;
  std::vector<NamedPolicy> deviations;
  std::vector<ExpectedQuantity> expected;
  std::vector<NamedState> states;
  std::vector<std::string> notes;

  std::optional<double> expected_value(const std::string& label) const;
  int state(const std::string& label) const;  // throws std::out_of_range
};

// Computes every expected quantity of `fixture` and compares.
std::vector<FixtureCheck> check_fixture(const Fixture& fixture);

// Three-state cooperative cycle: matching state occupancy, large Nash gap.
Fixture figure1_game(double gamma);

// Odd/even branch game with parity-preserving absorbing tails after
// `chain_pairs` pairs: matching state-action occupancy, Nash gap linear in the
// horizon.
Fixture unvisited_state_game(double gamma, int chain_pairs = 5);

// Chain of k states in front of an absorbing state the expert barely visits.
Fixture chain_trap_game(double epsilon, double gamma);
int chain_trap_length(double epsilon, double gamma);

// Two states, rewards depend only on the own action, transitions on the
// joint action. Action 0 is weakly dominant for both players.
Fixture dse_game(double gamma);

// Two-player zero-sum tag on a 2x3 grid, 72 states, four moves each.
MarkovGame tag_game(double gamma = 0.8);

struct TagState {
  int pos1 = 0;
  int pos2 = 0;
  int tagger = 1;  // 1 or 2
};
int tag_state_index(const TagState& state);
TagState tag_state_of(int index);

// Fixture by CLI name: figure1, unvisited-state, chain-trap, dse.
// Throws std::invalid_argument for unknown names.
Fixture fixture_by_name(const std::string& name, double gamma, double epsilon, int chain_pairs);

}  // namespace nashgap

#endif  // NASHGAP_FIXTURES_H_
