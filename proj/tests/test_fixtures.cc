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

#include <gtest/gtest.h>

#include <cmath>

#include "nashgap/dynamics.h"
#include "nashgap/equilibrium.h"
#include "nashgap/fixtures.h"

namespace nashgap {
namespace {

void expect_all_checks_pass(const Fixture& f) {
  for (const auto& c : check_fixture(f)) {
    EXPECT_TRUE(c.pass) << f.name << " " << c.expected.label << ": expected "
                        << c.expected.value << ", computed " << c.computed;
  }
}

TEST(FigureOne, ClaimsHoldAcrossDiscounts) {
  for (double gamma : {0.5, 0.9, 0.99}) {
    const Fixture f = figure1_game(gamma);
    EXPECT_TRUE(validate_game(f.game).empty());
    expect_all_checks_pass(f);
    EXPECT_LT(measure_errors(f.game, f.expert, f.learner).eps_mu, 1e-10);
    EXPECT_GE(nash_gap(f.game, f.learner) * (1.0 - gamma), 5.0 / 3.0 - 1e-6);
    EXPECT_TRUE(verify_nash(f.game, f.expert).is_nash);
  }
}

TEST(FigureOne, GapAtNineTenths) {
  const Fixture f = figure1_game(0.9);
  EXPECT_GE(nash_gap(f.game, f.learner), 50.0 / 3.0 - 1e-6);
}

TEST(UnvisitedState, OccupancyMatchesButGapIsLinear) {
  for (double gamma : {0.5, 0.9, 0.99}) {
    const Fixture f = unvisited_state_game(gamma, 5);
    expect_all_checks_pass(f);
    EXPECT_EQ(measure_errors(f.game, f.expert, f.learner).eps_rho, 0.0);
    EXPECT_GE(nash_gap(f.game, f.learner) * (1.0 - gamma), gamma - 1e-9);
  }
}

TEST(UnvisitedState, DeviationValueIsGeometric) {
  const Fixture f = unvisited_state_game(0.9, 5);
  const auto v = initial_values(f.game, f.deviations.at(0).policy);
  EXPECT_NEAR(v[0], 0.9 / 0.1, 1e-9);
  EXPECT_NEAR(nash_gap(f.game, f.learner), 1.0 / 0.1 - 1.0, 1e-9);
}

TEST(UnvisitedState, ValuesDoNotDependOnChainLength) {
  for (int pairs : {2, 3, 8}) {
    const Fixture f = unvisited_state_game(0.8, pairs);
    EXPECT_EQ(f.game.num_states(), 2 * pairs + 1);
    EXPECT_NEAR(initial_values(f.game, f.deviations.at(0).policy)[0], 0.8 / 0.2, 1e-9);
  }
  EXPECT_THROW(unvisited_state_game(0.9, 1), std::invalid_argument);
}

TEST(UnvisitedState, ExpertCanBeExploitedAtTheRoot) {
  // Player 1 switching to a2 at s0 reaches the rewarding state s1 once.
  const Fixture f = unvisited_state_game(0.9, 5);
  const NashCheck c = verify_nash(f.game, f.expert);
  EXPECT_FALSE(c.is_nash);
  EXPECT_NEAR(c.gains[0], 0.9, 1e-9);
  EXPECT_NEAR(c.gains[1], 0.0, 1e-12);
}

TEST(ChainTrap, ClaimsHoldOnTheGrid) {
  for (double eps : {0.01, 0.1}) {
    for (double gamma : {0.5, 0.9}) {
      const Fixture f = chain_trap_game(eps, gamma);
      expect_all_checks_pass(f);
      const OccupancyPair occ = occupancy(f.game, f.expert);
      EXPECT_LE(occ.mu[f.state("s_exp")], eps / 2.0);
      EXPECT_LE(bc_error(f.game, f.expert, f.learner), eps);
      EXPECT_NEAR(br_distances(f.game, f.expert, f.learner, BrSelection::kFarthest)[0], 2.0,
                  1e-9);
    }
  }
}

TEST(ChainTrap, LengthFormula) {
  // k = ceil(log((eps/2)(1 - gamma)) / log(gamma)).
  EXPECT_EQ(chain_trap_length(0.1, 0.5), 6);
  EXPECT_EQ(chain_trap_length(0.01, 0.5), 9);
  EXPECT_EQ(chain_trap_length(1.9, 0.01), 1);
  EXPECT_EQ(chain_trap_game(1.9, 0.01).game.num_states(), 3);
  EXPECT_THROW(chain_trap_game(2.0, 0.5), std::invalid_argument);
}

TEST(Dse, ExpertIsEquilibriumAndDominant) {
  const Fixture f = dse_game(0.9);
  expect_all_checks_pass(f);
  EXPECT_TRUE(verify_nash(f.game, f.expert).is_nash);
  // Against any opponent the response equals the expert action.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProductPolicy pi = random_policy(seed, 2, {2, 2});
    const auto d = br_distances(f.game, f.expert, pi);
    EXPECT_EQ(d[0], 0.0);
    EXPECT_EQ(d[1], 0.0);
  }
}

TEST(Dse, TransitionsDependOnTheJointAction) {
  const Fixture f = dse_game(0.9);
  EXPECT_NE(f.game.transition(0, 0, 0), f.game.transition(0, 1, 0));
}

TEST(TagGame, ShapeAndValidity) {
  const MarkovGame g = tag_game();
  EXPECT_EQ(g.num_states(), 72);
  EXPECT_EQ(g.num_actions(0), 4);
  EXPECT_EQ(g.num_actions(1), 4);
  EXPECT_DOUBLE_EQ(g.gamma(), 0.8);
  EXPECT_TRUE(validate_game(g).empty());
  EXPECT_TRUE(g.is_zero_sum(1e-12));
  double nu = 0.0;
  for (double p : g.initial_dist()) nu += p;
  EXPECT_NEAR(nu, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(g.initial_dist()[tag_state_index({0, 5, 1})], 0.5);
  EXPECT_DOUBLE_EQ(g.initial_dist()[tag_state_index({0, 2, 1})], 0.5);
}

TEST(TagGame, StateIndexRoundTrip) {
  for (int s = 0; s < 72; ++s) EXPECT_EQ(tag_state_index(tag_state_of(s)), s);
}

TEST(TagGame, MovesCollisionsAndPenalties) {
  const MarkovGame g = tag_game();
  const JointActionIndexer& idx = g.joint();
  auto next_of = [&](int s, int a) {
    for (int t = 0; t < 72; ++t) {
      if (g.transition(s, a, t) == 1.0) return tag_state_of(t);
    }
    return TagState{-1, -1, 0};
  };
  // Up=0, down=1, left=2, right=3. Player 1 at 0 steps right onto player 2
  // standing still against the wall at 1: roles flip.
  const int s = tag_state_index({0, 1, 1});
  const int a = idx.encode(std::vector<int>{3, 0});  // p2 tries up, stays
  const TagState t = next_of(s, a);
  EXPECT_EQ(t.pos1, 1);
  EXPECT_EQ(t.pos2, 1);
  EXPECT_EQ(t.tagger, 2);
  // Tagger pays 1, player 2's off-grid attempt pays 0.5 to player 1; halved.
  EXPECT_DOUBLE_EQ(g.reward(0, s, a), 0.5 * (-1.0 + 0.5));
  // Swapping cells is not a tag.
  const TagState sw = next_of(s, idx.encode(std::vector<int>{3, 2}));
  EXPECT_EQ(sw.pos1, 1);
  EXPECT_EQ(sw.pos2, 0);
  EXPECT_EQ(sw.tagger, 1);
}

TEST(TagGame, RoleSwapSymmetry) {
  const MarkovGame g = tag_game();
  const JointActionIndexer& idx = g.joint();
  for (int s = 0; s < 72; ++s) {
    const TagState st = tag_state_of(s);
    const int ms = tag_state_index({st.pos2, st.pos1, 3 - st.tagger});
    for (int a = 0; a < 16; ++a) {
      const int ma = idx.encode(std::vector<int>{idx.action_of(a, 1), idx.action_of(a, 0)});
      EXPECT_DOUBLE_EQ(g.reward(0, ms, ma), -g.reward(0, s, a));
      for (int t = 0; t < 72; ++t) {
        const TagState tt = tag_state_of(t);
        const int mt = tag_state_index({tt.pos2, tt.pos1, 3 - tt.tagger});
        EXPECT_EQ(g.transition(ms, ma, mt), g.transition(s, a, t));
      }
    }
  }
}

TEST(FixtureByName, KnownAndUnknown) {
  EXPECT_EQ(fixture_by_name("dse", 0.9, 0.1, 5).name, "dse");
  EXPECT_EQ(fixture_by_name("chain-trap", 0.9, 0.1, 5).name, "chain-trap");
  EXPECT_THROW(fixture_by_name("nope", 0.9, 0.1, 5), std::invalid_argument);
}

}  // namespace
}  // namespace nashgap
