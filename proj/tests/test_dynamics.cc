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
#include <numeric>
#include <random>

#include "nashgap/dynamics.h"
#include "nashgap/fixtures.h"
#include "nashgap/game.h"

namespace nashgap {
namespace {

// Truncated series oracle: mu = (1 - gamma) sum_t gamma^t nu0 P^t and
// V = sum_t gamma^t P^t r, propagated step by step.
struct SeriesOracle {
  std::vector<double> mu;
  std::vector<std::vector<double>> v;
};

SeriesOracle series(const MarkovGame& g, const ProductPolicy& pi, int horizon) {
  const int ns = g.num_states();
  const int na = g.num_joint_actions();
  std::vector<double> pp(static_cast<std::size_t>(ns) * ns, 0.0);
  std::vector<std::vector<double>> rp(g.num_players(), std::vector<double>(ns, 0.0));
  for (int s = 0; s < ns; ++s) {
    const auto joint = joint_distribution(pi, s);
    for (int a = 0; a < na; ++a) {
      for (int t = 0; t < ns; ++t) pp[s * ns + t] += joint[a] * g.transition(s, a, t);
      for (int i = 0; i < g.num_players(); ++i) rp[i][s] += joint[a] * g.reward(i, s, a);
    }
  }
  SeriesOracle out;
  out.mu.assign(ns, 0.0);
  std::vector<double> d(g.initial_dist().begin(), g.initial_dist().end());
  double w = 1.0 - g.gamma();
  for (int k = 0; k < horizon; ++k) {
    std::vector<double> next(ns, 0.0);
    for (int s = 0; s < ns; ++s) {
      out.mu[s] += w * d[s];
      for (int t = 0; t < ns; ++t) next[t] += d[s] * pp[s * ns + t];
    }
    d = next;
    w *= g.gamma();
  }
  for (int i = 0; i < g.num_players(); ++i) {
    std::vector<double> v(ns, 0.0);
    for (int k = 0; k < horizon; ++k) {
      std::vector<double> nv(ns, 0.0);
      for (int s = 0; s < ns; ++s) {
        double acc = rp[i][s];
        for (int t = 0; t < ns; ++t) acc += g.gamma() * pp[s * ns + t] * v[t];
        nv[s] = acc;
      }
      v = nv;
    }
    out.v.push_back(v);
  }
  return out;
}

TEST(Occupancy, MatchesGeometricSeries) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MarkovGame g = random_game(seed, 2, 5, {2, 3}, 0.8);
    const ProductPolicy pi = random_policy(seed + 100, 5, {2, 3});
    const OccupancyPair occ = occupancy(g, pi);
    const SeriesOracle o = series(g, pi, 400);
    for (int s = 0; s < 5; ++s) EXPECT_NEAR(occ.mu[s], o.mu[s], 1e-12);
    EXPECT_NEAR(std::accumulate(occ.mu.begin(), occ.mu.end(), 0.0), 1.0, 1e-12);
    EXPECT_NEAR(std::accumulate(occ.rho.begin(), occ.rho.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Occupancy, RhoFactorisesThroughPolicy) {
  const MarkovGame g = random_game(9, 3, 4, {2, 2, 2}, 0.9);
  const ProductPolicy pi = random_policy(10, 4, {2, 2, 2});
  const OccupancyPair occ = occupancy(g, pi);
  for (int s = 0; s < 4; ++s) {
    const auto joint = joint_distribution(pi, s);
    for (int a = 0; a < 8; ++a) EXPECT_NEAR(occ.rho_at(s, a), occ.mu[s] * joint[a], 1e-15);
  }
}

TEST(Values, MatchSeriesAndOccupancyIdentity) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MarkovGame g = random_game(seed, 2, 4, {3, 2}, 0.9);
    const ProductPolicy pi = random_policy(seed + 7, 4, {3, 2});
    const ValueBundle vb = values(g, pi);
    const SeriesOracle o = series(g, pi, 800);
    const OccupancyPair occ = occupancy(g, pi);
    for (int i = 0; i < 2; ++i) {
      for (int s = 0; s < 4; ++s) EXPECT_NEAR(vb.v[i][s], o.v[i][s], 1e-9);
      double inner = 0.0;
      for (int s = 0; s < 4; ++s) {
        for (int a = 0; a < 6; ++a) inner += occ.rho_at(s, a) * g.reward(i, s, a);
      }
      EXPECT_NEAR(value_at_initial(g, vb.v[i]), inner / (1.0 - g.gamma()), 1e-8);
    }
  }
}

TEST(Values, QIsConsistentWithV) {
  const MarkovGame g = random_game(1, 2, 3, {2, 2}, 0.7);
  const ProductPolicy pi = random_policy(2, 3, {2, 2});
  const ValueBundle vb = values(g, pi);
  for (int i = 0; i < 2; ++i) {
    for (int s = 0; s < 3; ++s) {
      const auto joint = joint_distribution(pi, s);
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += joint[a] * vb.q_at(i, s, a);
      EXPECT_NEAR(v, vb.v[i][s], 1e-12);
    }
  }
}

TEST(BcError, HandComputedExample) {
  // Figure 1 at gamma 0.9: mu is uniform over the cycle; only player 2
  // differs and by a full L1 distance of 2.
  const Fixture f = figure1_game(0.9);
  EXPECT_NEAR(bc_error(f.game, f.expert, f.learner), 2.0, 1e-12);
  EXPECT_NEAR(bc_error(f.game, f.expert, f.expert), 0.0, 0.0);
  const OccupancyPair occ = occupancy(f.game, f.expert);
  EXPECT_NEAR(player_bc_error(occ.mu, f.expert, f.learner, 0), 0.0, 0.0);
  EXPECT_NEAR(player_bc_error(occ.mu, f.expert, f.learner, 1), 2.0, 1e-12);
}

TEST(BcError, BoundedByTwiceMixing) {
  const MarkovGame g = random_game(3, 2, 5, {3, 3}, 0.9);
  const ProductPolicy e = ProductPolicy::constant(5, {3, 3}, std::vector<int>{0, 2});
  const ProductPolicy u = ProductPolicy::uniform(5, {3, 3});
  for (double eta : {0.0, 0.1, 0.5, 1.0}) {
    std::vector<std::vector<double>> t;
    for (int i = 0; i < 2; ++i) {
      std::vector<double> row(e.table(i));
      for (std::size_t k = 0; k < row.size(); ++k) row[k] = (1 - eta) * row[k] + eta * u.table(i)[k];
      t.push_back(row);
    }
    const ProductPolicy mix(5, {3, 3}, t);
    EXPECT_NEAR(bc_error(g, e, mix), eta * 4.0 / 3.0, 1e-12);
  }
}

TEST(MeasureErrors, FigureOneMatchesStateButNotStateAction) {
  const Fixture f = figure1_game(0.9);
  const MeasureErrors m = measure_errors(f.game, f.expert, f.learner);
  EXPECT_LT(m.eps_mu, 1e-10);
  EXPECT_NEAR(m.eps_rho, 2.0, 1e-12);
}

TEST(Reconstruction, RecoversJointConditionalsOnSupport) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const MarkovGame g = random_game(seed, 2, 4, {2, 3}, 0.85);
    const ProductPolicy pi = random_policy(seed * 3 + 1, 4, {2, 3});
    const OccupancyPair occ = occupancy(g, pi);
    const Reconstruction rec = reconstruct_from_rho(occ.rho, 4, 6);
    for (int s : rec.support) {
      const auto joint = joint_distribution(pi, s);
      ASSERT_TRUE(rec.policy[s].has_value());
      for (int a = 0; a < 6; ++a) EXPECT_NEAR((*rec.policy[s])[a], joint[a], 1e-10);
    }
  }
}

TEST(Reconstruction, UnvisitedStatesCarryNoPolicy) {
  const Fixture f = unvisited_state_game(0.9, 3);
  const OccupancyPair occ = occupancy(f.game, f.expert);
  const Reconstruction rec = reconstruct_from_rho(occ.rho, f.game.num_states(),
                                                  f.game.num_joint_actions());
  // Only s0 and the even branch are visited.
  EXPECT_EQ(rec.support, (std::vector<int>{0, 2, 4, 6}));
  EXPECT_FALSE(rec.policy[1].has_value());
}

TEST(PerformanceDifference, ResidualIsTiny) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MarkovGame g = random_game(seed, 2, 4, {2, 3}, 0.9);
    const ProductPolicy pi = random_policy(seed + 1, 4, {2, 3});
    const ProductPolicy other = random_policy(seed + 2, 4, {2, 3});
    const int player = static_cast<int>(seed % 2);
    const ProductPolicy dev = pi.with_player_from(player, other);
    EXPECT_LT(pdl_residual(g, pi, dev, player), 1e-8);
  }
}

TEST(L1Product, JointGapBoundedBySumOfMarginals) {
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> unit(1.0, 1.0);
  auto simplex = [&](int n) {
    std::vector<double> v(n);
    double t = 0.0;
    for (double& x : v) t += (x = unit(rng));
    for (double& x : v) x /= t;
    return v;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> p, q;
    for (int i = 0; i < 3; ++i) {
      p.push_back(simplex(2 + trial % 3));
      q.push_back(simplex(2 + trial % 3));
    }
    const auto [joint, marginal] = l1_product_gap(p, q);
    EXPECT_LE(joint, marginal + 1e-12);
  }
  // Equality when only one factor differs.
  const auto [j, m] = l1_product_gap({{0.2, 0.8}, {0.5, 0.5}}, {{0.6, 0.4}, {0.5, 0.5}});
  EXPECT_NEAR(j, m, 1e-15);
}

}  // namespace
}  // namespace nashgap
