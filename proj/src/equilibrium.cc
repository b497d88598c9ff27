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

#include "nashgap/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashgap/dynamics.h"

namespace nashgap {
namespace {

// Action of `reference` least likely in state s, among `candidates`.
int farthest_action(const ProductPolicy& reference, int player, int s,
                    const std::vector<int>& candidates) {
  int arg = candidates.front();
  double lowest = reference.prob(player, s, arg);
  for (int a : candidates) {
    if (reference.prob(player, s, a) < lowest) {
      lowest = reference.prob(player, s, a);
      arg = a;
    }
  }
  return arg;
}

std::vector<bool> reachable(const InducedMdp& mdp, const std::vector<int>& actions) {
  std::vector<bool> seen(mdp.num_states, false);
  std::vector<int> stack;
  for (int s = 0; s < mdp.num_states; ++s) {
    if (mdp.initial_dist[s] > 0.0) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int t = 0; t < mdp.num_states; ++t) {
      if (!seen[t] && mdp.p(s, actions[s], t) > 0.0) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

double initial_value(const InducedMdp& mdp, const std::vector<double>& v) {
  double acc = 0.0;
  for (int s = 0; s < mdp.num_states; ++s) acc += mdp.initial_dist[s] * v[s];
  return acc;
}

double deterministic_distance(const ProductPolicy& reference, int player,
                              const std::vector<int>& actions,
                              const std::vector<double>& weights) {
  double acc = 0.0;
  for (int s = 0; s < reference.num_states(); ++s) {
    if (weights[s] == 0.0) continue;
    acc += weights[s] * (2.0 - 2.0 * reference.prob(player, s, actions[s]));
  }
  return acc;
}

}  // namespace

BestResponseResult best_response(const MarkovGame& game, const ProductPolicy& policy,
                                 int player) {
  const InducedMdp mdp = induced_mdp(game, policy, player);
  const OptimalValues opt = solve_optimal(mdp);
  const auto sets = optimal_action_sets(mdp, opt);
  BestResponseResult out;
  out.actions.resize(mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s) out.actions[s] = sets[s].front();
  out.value = initial_value(mdp, evaluate_deterministic(mdp, out.actions));
  out.iterations = opt.iterations;
  out.residual = opt.residual;
  return out;
}

BestResponseResult farthest_best_response(const MarkovGame& game, const ProductPolicy& policy,
                                          int player, const ProductPolicy& reference) {
  const InducedMdp mdp = induced_mdp(game, policy, player);
  const OptimalValues opt = solve_optimal(mdp);
  const auto sets = optimal_action_sets(mdp, opt);
  std::vector<int> actions(mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s) {
    actions[s] = farthest_action(reference, player, s, sets[s]);
  }
  const auto seen = reachable(mdp, actions);
  std::vector<int> all(mdp.num_actions);
  for (int a = 0; a < mdp.num_actions; ++a) all[a] = a;
  for (int s = 0; s < mdp.num_states; ++s) {
    if (!seen[s]) actions[s] = farthest_action(reference, player, s, all);
  }
  BestResponseResult out;
  out.value = initial_value(mdp, evaluate_deterministic(mdp, actions));
  const double optimum = initial_value(mdp, opt.v);
  if (out.value < optimum - tol::kIdentity) {
    // Cannot happen for states outside the reachable set; fall back to greedy.
    for (int s = 0; s < mdp.num_states; ++s) actions[s] = sets[s].front();
    out.value = initial_value(mdp, evaluate_deterministic(mdp, actions));
  }
  out.actions = std::move(actions);
  out.iterations = opt.iterations;
  out.residual = opt.residual;
  return out;
}

std::vector<std::vector<int>> all_optimal_deterministic(const MarkovGame& game,
                                                        const ProductPolicy& policy, int player,
                                                        long long max_policies) {
  const InducedMdp mdp = induced_mdp(game, policy, player);
  const OptimalValues opt = solve_optimal(mdp);
  const double optimum = initial_value(mdp, opt.v);
  long long total = 1;
  for (int s = 0; s < mdp.num_states; ++s) {
    total *= mdp.num_actions;
    if (total > max_policies) {
      throw std::invalid_argument("all_optimal_deterministic: too many policies to enumerate");
    }
  }
  std::vector<std::vector<int>> out;
  std::vector<int> actions(mdp.num_states, 0);
  for (long long code = 0; code < total; ++code) {
    long long rest = code;
    for (int s = mdp.num_states - 1; s >= 0; --s) {
      actions[s] = static_cast<int>(rest % mdp.num_actions);
      rest /= mdp.num_actions;
    }
    const double v = initial_value(mdp, evaluate_deterministic(mdp, actions));
    if (v >= optimum - 1e-9) out.push_back(actions);
  }
  return out;
}

NashCheck verify_nash(const MarkovGame& game, const ProductPolicy& policy, double tolerance) {
  const auto base = initial_values(game, policy);
  NashCheck out;
  out.gap = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const double gain = best_response(game, policy, i).value - base[i];
    if (gain < -tol::kIdentity) {
      throw SolverError("best response is worse than the current policy", gain);
    }
    out.gains.push_back(std::max(gain, 0.0));
    out.gap = std::max(out.gap, out.gains.back());
  }
  out.is_nash = out.gap <= tolerance;
  return out;
}

double nash_gap(const MarkovGame& game, const ProductPolicy& policy) {
  return verify_nash(game, policy).gap;
}

double value_gap(const MarkovGame& game, const ProductPolicy& expert,
                 const ProductPolicy& policy) {
  const auto ve = initial_values(game, expert);
  const auto vp = initial_values(game, policy);
  double gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ve.size(); ++i) gap = std::max(gap, ve[i] - vp[i]);
  return gap;
}

std::vector<double> br_distances(const MarkovGame& game, const ProductPolicy& expert,
                                 const ProductPolicy& policy, BrSelection selection) {
  const OccupancyPair occ = occupancy(game, expert);
  std::vector<double> out;
  for (int i = 0; i < game.num_players(); ++i) {
    const BestResponseResult br =
        selection == BrSelection::kLowestIndex
            ? best_response(game, policy, i)
            : farthest_best_response(game, policy, i, expert);
    out.push_back(deterministic_distance(expert, i, br.actions, occ.mu));
  }
  return out;
}

std::vector<double> soft_br_distances(const MarkovGame& game, const ProductPolicy& expert,
                                      const ProductPolicy& policy, double tau) {
  const OccupancyPair occ = occupancy(game, expert);
  std::vector<double> out;
  for (int i = 0; i < game.num_players(); ++i) {
    const InducedMdp mdp = induced_mdp(game, policy, i);
    const SoftSolution soft = solve_soft(mdp, tau);
    double acc = 0.0;
    for (int s = 0; s < game.num_states(); ++s) {
      if (occ.mu[s] == 0.0) continue;
      const std::span<const double> row(
          soft.policy.data() + static_cast<std::size_t>(s) * mdp.num_actions, mdp.num_actions);
      acc += occ.mu[s] * l1_distance(row, expert.dist(i, s));
    }
    out.push_back(acc);
  }
  return out;
}

DeltaCurve::DeltaCurve(std::vector<std::pair<double, double>> breakpoints)
    : points_(std::move(breakpoints)) {}

double DeltaCurve::operator()(double eps) const {
  // Breakpoints are sorted with cumulative-max values, so the last one at or
  // below eps carries the answer.
  auto it = std::upper_bound(points_.begin(), points_.end(), eps,
                             [](double e, const auto& p) { return e < p.first; });
  if (it == points_.begin()) return 0.0;
  return std::prev(it)->second;
}

bool DeltaCurve::is_monotone() const {
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (points_[k].first < points_[k - 1].first) return false;
    if (points_[k].second < points_[k - 1].second) return false;
  }
  return true;
}

DeltaCurve tight_delta(std::vector<std::pair<double, double>> samples) {
  if (samples.empty()) throw std::invalid_argument("tight_delta: no samples");
  for (const auto& [eps, dist] : samples) {
    if (!(eps >= 0.0)) throw std::invalid_argument("tight_delta: negative BC error");
    if (!(dist >= 0.0 && dist <= 2.0 + 1e-12)) {
      throw std::invalid_argument("tight_delta: BR distance outside [0, 2]");
    }
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double running = 0.0;
  for (auto& p : samples) {
    running = std::max(running, p.second);
    p.second = running;
  }
  return DeltaCurve(std::move(samples));
}

}  // namespace nashgap
