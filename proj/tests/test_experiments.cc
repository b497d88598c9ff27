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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nashgap/dynamics.h"
#include "nashgap/experiments.h"
#include "nashgap/fixtures.h"
#include "nashgap/game_io.h"
#include "nashgap/regularized.h"

namespace nashgap {
namespace {

MarkovGame repeated_matching_pennies(double gamma) {
  const std::vector<double> p(4, 1.0);
  const std::vector<double> r{0.5, -0.5, -0.5, 0.5, -0.5, 0.5, 0.5, -0.5};
  return make_valid_game(1, {2, 2}, p, r, {1.0}, gamma);
}

TEST(Perturb, ZeroNoiseIsTheExpert) {
  const ProductPolicy e = random_policy(3, 5, {3, 2});
  EXPECT_TRUE(perturb_policy(e, 0.0, 17) == e);
}

TEST(Perturb, FullNoiseIsTheRandomPoint) {
  const ProductPolicy e = ProductPolicy::constant(4, {3, 3}, std::vector<int>{0, 1});
  const ProductPolicy a = perturb_policy(e, 1.0, 5);
  const ProductPolicy b = perturb_policy(e, 1.0, 6);
  EXPECT_TRUE(validate_policy(a).empty());
  EXPECT_FALSE(a == b);
  // The expert leaves no trace: one-hot entries are not special.
  EXPECT_LT(a.prob(0, 0, 0), 1.0);
}

TEST(Perturb, DeterministicInSeedAndNoise) {
  const ProductPolicy e = random_policy(1, 3, {2, 4});
  EXPECT_TRUE(perturb_policy(e, 0.3, 9) == perturb_policy(e, 0.3, 9));
  EXPECT_FALSE(perturb_policy(e, 0.3, 9) == perturb_policy(e, 0.31, 9));
  EXPECT_THROW(perturb_policy(e, 1.5, 0), std::invalid_argument);
}

TEST(Perturb, BcErrorBoundedByTwiceNoise) {
  const MarkovGame g = random_game(4, 2, 6, {3, 3}, 0.9);
  const ProductPolicy e = random_policy(8, 6, {3, 3});
  for (double eta : {0.05, 0.2, 0.4, 0.8}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ProductPolicy pi = perturb_policy(e, eta, seed);
      EXPECT_TRUE(validate_policy(pi).empty());
      EXPECT_LE(bc_error(g, e, pi), 2.0 * eta + 1e-12);
    }
  }
}

TEST(Perturb, MeanBcErrorGrowsWithNoise) {
  const Fixture f = dse_game(0.9);
  const auto grid = linspace(0.0, 1.0, 11);
  std::vector<double> means;
  for (double eta : grid) {
    double m = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      m += bc_error(f.game, f.expert, perturb_policy(f.expert, eta, seed));
    }
    means.push_back(m / 20.0);
  }
  int inversions = 0;
  for (std::size_t k = 1; k < means.size(); ++k) inversions += means[k] < means[k - 1];
  EXPECT_LE(inversions, 1);
}

TEST(MonteCarlo, ZeroForTheExpert) {
  const Fixture f = figure1_game(0.9);
  EXPECT_EQ(mc_bc_error(f.game, f.expert, f.expert, 100, 1), 0.0);
}

TEST(MonteCarlo, ConsistentWithExactValue) {
  const MarkovGame g = random_game(12, 2, 5, {2, 3}, 0.8);
  const ProductPolicy e = random_policy(13, 5, {2, 3});
  for (double eta : {0.1, 0.5}) {
    const ProductPolicy pi = perturb_policy(e, eta, 3);
    EXPECT_NEAR(mc_bc_error(g, e, pi, 20000, 4), bc_error(g, e, pi), 0.05);
  }
}

TEST(MonteCarlo, TagGameSeedsDifferButAgree) {
  const MarkovGame g = tag_game();
  const ProductPolicy e = regularized_nash_vi(g, 0.5).policy;
  const ProductPolicy pi = perturb_policy(e, 0.2, 1);
  const double exact = bc_error(g, e, pi);
  const double a = mc_bc_error(g, e, pi, 2000, 1);
  const double b = mc_bc_error(g, e, pi, 2000, 2);
  EXPECT_NE(a, b);
  EXPECT_NEAR(a, exact, 0.05);
  EXPECT_NEAR(b, exact, 0.05);
  EXPECT_EQ(a, mc_bc_error(g, e, pi, 2000, 1));
}

TEST(BoundValidation, DseRecordsObeyDominantBound) {
  const Fixture f = dse_game(0.9);
  const auto run = bound_validation_run(f.game, f.expert, linspace(0.0, 0.5, 6), {0, 1, 2});
  ASSERT_EQ(run.records.size(), 18u);
  EXPECT_EQ(run.failures, 0);
  const double h2 = 1.0 / (0.1 * 0.1);
  for (const auto& r : run.records) {
    EXPECT_EQ(r.max_br_dist(), 0.0);
    EXPECT_LE(r.nash_gap, 2.0 * 2.0 * r.eps_bc_exact * h2 + 1e-9);
    EXPECT_LE(r.nash_gap, r.bound_value + 1e-9);
  }
  EXPECT_EQ(run.delta(10.0), 0.0);
  // Zero-noise records come first and are exact.
  EXPECT_EQ(run.records[0].noise, 0.0);
  EXPECT_EQ(run.records[0].eps_bc_exact, 0.0);
  EXPECT_NEAR(run.records[0].nash_gap, 0.0, 1e-9);
}

TEST(BoundValidation, RecordsAreSortedAndEnvelopeMonotone) {
  const Fixture f = figure1_game(0.8);
  const auto run = bound_validation_run(f.game, f.expert, {0.3, 0.1, 0.2}, {5, 2}, {200});
  ASSERT_EQ(run.records.size(), 6u);
  for (std::size_t k = 1; k < run.records.size(); ++k) {
    const auto& a = run.records[k - 1];
    const auto& b = run.records[k];
    EXPECT_TRUE(a.noise < b.noise || (a.noise == b.noise && a.seed < b.seed));
  }
  for (std::size_t k = 1; k < run.gap_envelope.size(); ++k) {
    EXPECT_GE(run.gap_envelope[k].second, run.gap_envelope[k - 1].second);
  }
  for (const auto& r : run.records) {
    EXPECT_LE(r.nash_gap, r.bound_value + 1e-9);
    EXPECT_GE(r.eps_bc_exact, 0.0);
    EXPECT_LE(r.eps_bc_exact, 2.0);
  }
}

TEST(BoundValidation, RegularisedExpertAtZeroNoise) {
  const MarkovGame g = repeated_matching_pennies(0.8);
  const double tau = 0.1;
  const auto eq = regularized_nash_vi(g, tau);
  const auto run = bound_validation_run(g, eq.policy, {0.0}, {0});
  ASSERT_EQ(run.records.size(), 1u);
  EXPECT_EQ(run.records[0].eps_bc_exact, 0.0);
  // Symmetric game: the regularised and unregularised equilibria coincide.
  EXPECT_LT(run.records[0].nash_gap, 1e-6);
}

TEST(Sweep, SingleCurveIsMonotone) {
  const MarkovGame g = repeated_matching_pennies(0.8);
  const auto sweep = temperature_sweep(g, {0.1}, linspace(0.0, 0.5, 8), {0, 1}, {});
  ASSERT_EQ(sweep.curves.size(), 1u);
  EXPECT_FALSE(sweep.curves[0].failed);
  EXPECT_TRUE(sweep.curves[0].curve.is_monotone());
  EXPECT_EQ(sweep.curves[0].on_grid.size(), sweep.eps_grid.size());
  for (std::size_t k = 1; k < sweep.eps_grid.size(); ++k) {
    EXPECT_GE(sweep.curves[0].on_grid[k], sweep.curves[0].on_grid[k - 1]);
  }
  EXPECT_THROW(temperature_sweep(figure1_game(0.9).game, {0.1}, {0.0}, {0}, {}),
               std::invalid_argument);
}

TEST(Csv, HeaderAndShape) {
  EXPECT_EQ(records_csv({}),
            "noise,seed,eps_bc_exact,eps_bc_mc,br_dist_p1,br_dist_p2,nash_gap,bound_value\n");
  PerturbationRecord r;
  r.noise = 0.1;
  r.seed = 3;
  r.eps_bc_exact = 1.0 / 3.0;
  r.eps_bc_mc = 0.25;
  r.br_dist = {0.5, 0.0};
  r.nash_gap = 2.0;
  r.bound_value = 4.0;
  const std::string csv = records_csv({r});
  std::istringstream in(csv);
  std::string header, line, extra;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  EXPECT_EQ(line, "0.1,3,0.333333333333,0.25,0.5,0,2,4");
}

TEST(Csv, RerunIsByteIdentical) {
  const Fixture f = dse_game(0.9);
  const auto a = bound_validation_run(f.game, f.expert, linspace(0.0, 0.4, 5), {0, 1}, {300});
  const auto b = bound_validation_run(f.game, f.expert, linspace(0.0, 0.4, 5), {0, 1}, {300});
  EXPECT_EQ(records_csv(a.records), records_csv(b.records));
  EXPECT_EQ(delta_csv(0.0, a.delta), delta_csv(0.0, b.delta));
}

TEST(Config, ParsesAndValidates) {
  const ExperimentConfig c = parse_experiment_config(R"({
    "game": "dse", "gamma": 0.8, "noise": {"min": 0, "max": 0.3, "count": 4},
    "seeds": 3, "episodes": 50, "br_mode": "farthest", "output": "x.csv"})");
  EXPECT_EQ(c.game, "dse");
  EXPECT_EQ(*c.gamma, 0.8);
  EXPECT_EQ(c.noise_count, 4);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(c.mode, DistanceMode::kFarthest);
  EXPECT_THROW(parse_experiment_config(R"({"bogus": 1})"), ParseError);
  EXPECT_THROW(parse_experiment_config(R"({"noise": {"max": 2}})"), ParseError);
  EXPECT_THROW(parse_experiment_config(R"({"br_mode": "best"})"), ParseError);
  EXPECT_THROW(parse_experiment_config("[1"), ParseError);
}

}  // namespace
}  // namespace nashgap
