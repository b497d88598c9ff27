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

#ifndef NASHGAP_MDP_H_
#define NASHGAP_MDP_H_

#include <vector>

#include "nashgap/game.h"

namespace nashgap {

// Single-agent MDP faced by one player when the others are held fixed.
struct InducedMdp {
  int num_states = 0;
  int num_actions = 0;
  double gamma = 0.0;
  std::vector<double> transitions;  // [s][a][s']
  std::vector<double> rewards;      // [s][a]
  std::vector<double> initial_dist;

  double p(int s, int a, int t) const {
    return transitions[(static_cast<std::size_t>(s) * num_actions + a) * num_states + t];
  }
  double r(int s, int a) const { return rewards[static_cast<std::size_t>(s) * num_actions + a]; }
};

// Marginalises transitions and r_i over pi_{-i}.
InducedMdp induced_mdp(const MarkovGame& game, const ProductPolicy& policy, int player);

struct OptimalValues {
  std::vector<double> v;  // V*
  std::vector<double> q;  // Q*[s][a]
  int iterations = 0;
  double residual = 0.0;  // max_s |max_a Q(s,a) - V(s)|
};

// Value iteration to Bellman residual `tolerance`, then polished by exact
// policy evaluation of the greedy policy until it is stable. Throws
// SolverError when the iteration cap is hit first.
OptimalValues solve_optimal(const InducedMdp& mdp, double tolerance = tol::kSolveResidual);

// Exact V^pi for a deterministic policy.
std::vector<double> evaluate_deterministic(const InducedMdp& mdp,
                                           const std::vector<int>& actions);

// Actions within `slack` of the best Q in each state.
std::vector<std::vector<int>> optimal_action_sets(const InducedMdp& mdp,
                                                  const OptimalValues& opt,
                                                  double slack = 1e-9);

// Soft-optimal values and softmax policy of the tau-entropy-regularised MDP.
struct SoftSolution {
  std::vector<double> v;
  std::vector<double> policy;  // [s][a]
  int iterations = 0;
  double residual = 0.0;
};
SoftSolution solve_soft(const InducedMdp& mdp, double tau,
                        double tolerance = tol::kSolveResidual);

}  // namespace nashgap

#endif  // NASHGAP_MDP_H_
