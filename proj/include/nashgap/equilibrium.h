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

#ifndef NASHGAP_EQUILIBRIUM_H_
#define NASHGAP_EQUILIBRIUM_H_

#include <utility>
#include <vector>

#include "nashgap/game.h"
#include "nashgap/mdp.h"

namespace nashgap {

// Which element of the best-response set to return.
enum class BrSelection {
  kLowestIndex,  // greedy, ties to the lowest action index
  kFarthest,     // optimal policy pushed as far from a reference as allowed
};

struct BestResponseResult {
  std::vector<int> actions;  // [s]
  double value = 0.0;        // V_i^{BR, pi_{-i}}(nu0)
  int iterations = 0;
  double residual = 0.0;
};

BestResponseResult best_response(const MarkovGame& game, const ProductPolicy& policy,
                                 int player);

// Optimal deterministic policy pushed as far from `reference` as the
// best-response set allows: among optimal actions on the states the response
// reaches from nu0, and among all actions on the states it never reaches (any
// choice there leaves V(nu0) optimal).
BestResponseResult farthest_best_response(const MarkovGame& game, const ProductPolicy& policy,
                                          int player, const ProductPolicy& reference);

// Slow exact mode: every deterministic policy whose value from nu0 is optimal.
// Guarded to at most `max_policies` candidates.
std::vector<std::vector<int>> all_optimal_deterministic(const MarkovGame& game,
                                                        const ProductPolicy& policy, int player,
                                                        long long max_policies = 1 << 20);

// Nash gap: max_i (V_i^{BR_i, pi_{-i}}(nu0) - V_i^pi(nu0)), clamped at 0.
double nash_gap(const MarkovGame& game, const ProductPolicy& policy);

// max_i (V_i^{expert}(nu0) - V_i^{policy}(nu0)).
double value_gap(const MarkovGame& game, const ProductPolicy& expert,
                 const ProductPolicy& policy);

struct NashCheck {
  bool is_nash = false;
  std::vector<double> gains;  // per-player best-response improvement
  double gap = 0.0;
};
NashCheck verify_nash(const MarkovGame& game, const ProductPolicy& policy,
                      double tolerance = tol::kIdentity);

// E_{s ~ mu_E}[|| BR_i(policy_{-i}) - expert_i ||_1] for each player.
std::vector<double> br_distances(const MarkovGame& game, const ProductPolicy& expert,
                                 const ProductPolicy& policy,
                                 BrSelection selection = BrSelection::kLowestIndex);

// Same distance with the tau-regularised (softmax) best response.
std::vector<double> soft_br_distances(const MarkovGame& game, const ProductPolicy& expert,
                                      const ProductPolicy& policy, double tau);

// Monotone step function: delta(eps) = max over breakpoints with eps' <= eps,
// 0 below the first breakpoint.
class DeltaCurve {
 public:
  DeltaCurve() = default;
  explicit DeltaCurve(std::vector<std::pair<double, double>> breakpoints);

  double operator()(double eps) const;
  const std::vector<std::pair<double, double>>& breakpoints() const { return points_; }
  bool is_monotone() const;

 private:
  std::vector<std::pair<double, double>> points_;
};

// Sort by eps, cumulative max over the BR distances. Throws on empty input.
DeltaCurve tight_delta(std::vector<std::pair<double, double>> samples);

}  // namespace nashgap

#endif  // NASHGAP_EQUILIBRIUM_H_
