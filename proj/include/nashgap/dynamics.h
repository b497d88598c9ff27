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

#ifndef NASHGAP_DYNAMICS_H_
#define NASHGAP_DYNAMICS_H_

#include <optional>
#include <utility>
#include <vector>

#include "nashgap/game.h"

namespace nashgap {

// Discounted state occupancy mu and state-action occupancy rho = mu * pi.
struct OccupancyPair {
  std::vector<double> mu;   // [s]
  std::vector<double> rho;  // [s][joint]
  int num_joint_actions = 0;

  double rho_at(int s, int a) const {
    return rho[static_cast<std::size_t>(s) * num_joint_actions + a];
  }
  // States with mu(s) > 0.
  std::vector<int> visited(double threshold = 0.0) const;
};

struct ValueBundle {
  std::vector<std::vector<double>> v;  // [i][s]
  std::vector<std::vector<double>> q;  // [i][s * joint + a]
  int num_joint_actions = 0;

  double q_at(int player, int s, int a) const {
    return q[player][static_cast<std::size_t>(s) * num_joint_actions + a];
  }
};

// mu = (1 - gamma) nu0 + gamma P_pi^T mu, by direct dense solve.
OccupancyPair occupancy(const MarkovGame& game, const ProductPolicy& policy);

// V_i^pi and Q_i^pi for every player via the Bellman evaluation system.
// Throws SolverError if the occupancy identity
// V_i(nu0) = <rho, r_i> / (1 - gamma) fails by more than 1e-8.
ValueBundle values(const MarkovGame& game, const ProductPolicy& policy);

// E_{s ~ nu0}[V(s)].
double value_at_initial(const MarkovGame& game, const std::vector<double>& v);

// Per-player V_i^pi(nu0).
std::vector<double> initial_values(const MarkovGame& game, const ProductPolicy& policy);

// max_i sum_s mu_E(s) || pi_i(.|s) - pi^E_i(.|s) ||_1 with the exact mu_E.
double bc_error(const MarkovGame& game, const ProductPolicy& expert,
                const ProductPolicy& learner);

// Same weighting, but a single player's term.
double player_bc_error(const std::vector<double>& weights, const ProductPolicy& expert,
                       const ProductPolicy& learner, int player);

struct MeasureErrors {
  double eps_mu = 0.0;
  double eps_rho = 0.0;
};
MeasureErrors measure_errors(const MarkovGame& game, const ProductPolicy& expert,
                             const ProductPolicy& learner);

// Joint conditionals recovered from a state-action table; states outside the
// support have no policy (nullopt).
struct Reconstruction {
  std::vector<int> support;
  std::vector<std::optional<std::vector<double>>> policy;  // [s] -> joint dist
};
Reconstruction reconstruct_from_rho(const std::vector<double>& rho, int num_states,
                                    int num_joint_actions);

// |LHS - RHS| of the performance difference identity for player i, with the
// deviating policy `deviation` (any full product policy).
double pdl_residual(const MarkovGame& game, const ProductPolicy& policy,
                    const ProductPolicy& deviation, int player);

// (|| x p_i - x q_i ||_1, sum_i || p_i - q_i ||_1).
std::pair<double, double> l1_product_gap(const std::vector<std::vector<double>>& p,
                                         const std::vector<std::vector<double>>& q);

double l1_distance(std::span<const double> p, std::span<const double> q);

}  // namespace nashgap

#endif  // NASHGAP_DYNAMICS_H_
