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
#include <random>

#include "nashgap/equilibrium.h"
#include "nashgap/fixtures.h"
#include "nashgap/regularized.h"

namespace nashgap {
namespace {

std::vector<double> softmax(std::vector<double> z, double tau) {
  const double m = *std::max_element(z.begin(), z.end());
  double t = 0.0;
  for (double& v : z) t += (v = std::exp((v - m) / tau));
  for (double& v : z) v /= t;
  return z;
}

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

// Primal and dual objectives of max_x min_y x'Ay + tau H(x) - tau H(y).
double primal(const std::vector<double>& a, int rows, int cols, double tau,
              const std::vector<double>& x) {
  double lse = 0.0;
  std::vector<double> z(cols, 0.0);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) z[c] -= a[r * cols + c] * x[r];
  }
  const double m = *std::max_element(z.begin(), z.end());
  for (double v : z) lse += std::exp((v - m) / tau);
  return tau * entropy(x) - (m + tau * std::log(lse));
}

double dual(const std::vector<double>& a, int rows, int cols, double tau,
            const std::vector<double>& y) {
  double lse = 0.0;
  std::vector<double> z(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) z[r] += a[r * cols + c] * y[c];
  }
  const double m = *std::max_element(z.begin(), z.end());
  for (double v : z) lse += std::exp((v - m) / tau);
  return m + tau * std::log(lse) - tau * entropy(y);
}

TEST(RegularizedStage, MatchingPenniesIsUniform) {
  const StageSolution s = solve_regularized_stage({1, -1, -1, 1}, 2, 2, 0.1);
  EXPECT_NEAR(s.x[0], 0.5, 1e-12);
  EXPECT_NEAR(s.y[0], 0.5, 1e-12);
  EXPECT_NEAR(s.value, 0.0, 1e-12);
  EXPECT_LT(s.residual, 1e-12);
}

TEST(RegularizedStage, ClosesTheDualityGap) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double tau : {0.01, 0.05, 0.1, 0.5, 2.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const int rows = 2 + trial % 3;
      const int cols = 4 - trial % 2;
      std::vector<double> a(rows * cols);
      for (double& v : a) v = u(rng);
      const StageSolution s = solve_regularized_stage(a, rows, cols, tau);
      EXPECT_LT(s.residual, 1e-12);
      EXPECT_NEAR(primal(a, rows, cols, tau, s.x), s.value, 1e-9);
      EXPECT_NEAR(dual(a, rows, cols, tau, s.y), s.value, 1e-9);
    }
  }
}

TEST(RegularizedNashVi, RejectsGeneralSumGames) {
  EXPECT_THROW(regularized_nash_vi(figure1_game(0.9).game, 0.1), std::invalid_argument);
  EXPECT_THROW(regularized_nash_vi(tag_game(), 0.0), std::invalid_argument);
}

TEST(RegularizedNashVi, TagGameFixedPoint) {
  const MarkovGame g = tag_game();
  const double tau = 0.1;
  const RegularizedNash eq = regularized_nash_vi(g, tau);
  EXPECT_LT(eq.outer_residual, 1e-8);
  EXPECT_LT(eq.stage_residual, 1e-8);
  // Recompute every stage softmax condition from the returned values.
  double worst = 0.0;
  for (int s = 0; s < g.num_states(); ++s) {
    std::vector<double> q(16, 0.0);
    for (int a = 0; a < 16; ++a) {
      q[a] = g.reward(0, s, a);
      for (int t = 0; t < g.num_states(); ++t) q[a] += g.gamma() * g.transition(s, a, t) * eq.values[t];
    }
    std::vector<double> x(eq.policy.dist(0, s).begin(), eq.policy.dist(0, s).end());
    std::vector<double> y(eq.policy.dist(1, s).begin(), eq.policy.dist(1, s).end());
    std::vector<double> qy(4, 0.0), qx(4, 0.0);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        qy[r] += q[r * 4 + c] * y[c];
        qx[c] -= q[r * 4 + c] * x[r];
      }
    }
    const auto bx = softmax(qy, tau);
    const auto by = softmax(qx, tau);
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, std::abs(bx[k] - x[k]));
      worst = std::max(worst, std::abs(by[k] - y[k]));
    }
    EXPECT_NEAR(dual(q, 4, 4, tau, y), eq.values[s], 1e-7);
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(RegularizedNashVi, NashGapShrinksWithTemperature) {
  const MarkovGame g = tag_game();
  const double big = nash_gap(g, regularized_nash_vi(g, 0.5).policy);
  const double small = nash_gap(g, regularized_nash_vi(g, 0.1).policy);
  EXPECT_GT(big, small);
  // Regularisation bias: at most tau (log|A1| + log|A2|) per step.
  EXPECT_LE(small, 0.1 * 2.0 * std::log(4.0) / (1.0 - g.gamma()));
}

}  // namespace
}  // namespace nashgap
