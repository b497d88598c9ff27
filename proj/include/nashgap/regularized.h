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

#ifndef NASHGAP_REGULARIZED_H_
#define NASHGAP_REGULARIZED_H_

#include <vector>

#include "nashgap/game.h"

namespace nashgap {

// Entropy-regularised zero-sum matrix game
//   max_x min_y  x^T A y + tau H(x) - tau H(y).
struct StageSolution {
  std::vector<double> x;
  std::vector<double> y;
  double value = 0.0;
  double residual = 0.0;  // sup-norm distance to the softmax fixed point
  int iterations = 0;
};

// A is rows x cols, row-major. x and y warm-start the iteration when sized.
StageSolution solve_regularized_stage(const std::vector<double>& payoff, int rows, int cols,
                                      double tau, std::vector<double> x = {},
                                      std::vector<double> y = {},
                                      double tolerance = 1e-12, int max_iterations = 100000);

struct RegularizedNash {
  ProductPolicy policy;
  std::vector<double> values;  // regularised value of player 0 per state
  int sweeps = 0;
  double outer_residual = 0.0;
  double stage_residual = 0.0;  // worst per-state fixed-point residual at the end
};

struct RegularizedNashOptions {
  double outer_tolerance = 1e-8;
  int max_sweeps = 10000;
  double inner_tolerance = 1e-12;
  int max_inner_iterations = 100000;
};

// Nash value iteration for two-player zero-sum games with entropy
// regularisation `tau` on both players. Throws std::invalid_argument for
// non-zero-sum input and SolverError on non-convergence.
RegularizedNash regularized_nash_vi(const MarkovGame& game, double tau,
                                    const RegularizedNashOptions& options = {});

}  // namespace nashgap

#endif  // NASHGAP_REGULARIZED_H_
