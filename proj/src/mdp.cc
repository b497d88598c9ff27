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

#include "nashgap/mdp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace nashgap {
namespace {

int iteration_cap(double gamma, double tolerance) {
  return static_cast<int>(std::ceil(10.0 * std::log(1.0 / tolerance) / (1.0 - gamma))) + 1;
}

double q_value(const InducedMdp& mdp, const std::vector<double>& v, int s, int a) {
  const double* row =
      mdp.transitions.data() + (static_cast<std::size_t>(s) * mdp.num_actions + a) * mdp.num_states;
  double next = 0.0;
  for (int t = 0; t < mdp.num_states; ++t) next += row[t] * v[t];
  return mdp.r(s, a) + mdp.gamma * next;
}

std::vector<int> greedy(const InducedMdp& mdp, const std::vector<double>& v, double slack) {
  std::vector<int> out(mdp.num_states, 0);
  for (int s = 0; s < mdp.num_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.num_actions; ++a) best = std::max(best, q_value(mdp, v, s, a));
    for (int a = 0; a < mdp.num_actions; ++a) {
      if (q_value(mdp, v, s, a) >= best - slack) {
        out[s] = a;
        break;
      }
    }
  }
  return out;
}

}  // namespace

InducedMdp induced_mdp(const MarkovGame& game, const ProductPolicy& policy, int player) {
  require_compatible(game, policy);
  if (player < 0 || player >= game.num_players()) throw std::out_of_range("player index");
  const auto& idx = game.joint();
  InducedMdp mdp;
  mdp.num_states = game.num_states();
  mdp.num_actions = game.num_actions(player);
  mdp.gamma = game.gamma();
  mdp.initial_dist.assign(game.initial_dist().begin(), game.initial_dist().end());
  const int ns = mdp.num_states;
  mdp.transitions.assign(static_cast<std::size_t>(ns) * mdp.num_actions * ns, 0.0);
  mdp.rewards.assign(static_cast<std::size_t>(ns) * mdp.num_actions, 0.0);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      double w = 1.0;
      for (int j = 0; j < game.num_players(); ++j) {
        if (j != player) w *= policy.prob(j, s, idx.action_of(a, j));
      }
      if (w == 0.0) continue;
      const int own = idx.action_of(a, player);
      mdp.rewards[static_cast<std::size_t>(s) * mdp.num_actions + own] += w * game.reward(player, s, a);
      const auto row = game.transition_row(s, a);
      double* dst = mdp.transitions.data() +
                    (static_cast<std::size_t>(s) * mdp.num_actions + own) * ns;
      for (int t = 0; t < ns; ++t) dst[t] += w * row[t];
    }
  }
  return mdp;
}

std::vector<double> evaluate_deterministic(const InducedMdp& mdp,
                                           const std::vector<int>& actions) {
  const int ns = mdp.num_states;
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(ns, ns);
  Eigen::VectorXd r(ns);
  for (int s = 0; s < ns; ++s) {
    r(s) = mdp.r(s, actions[s]);
    for (int t = 0; t < ns; ++t) system(s, t) -= mdp.gamma * mdp.p(s, actions[s], t);
  }
  const Eigen::VectorXd v = system.partialPivLu().solve(r);
  return {v.data(), v.data() + ns};
}

OptimalValues solve_optimal(const InducedMdp& mdp, double tolerance) {
  const int ns = mdp.num_states;
  const int cap = iteration_cap(mdp.gamma, tolerance);
  std::vector<double> v(ns, 0.0), next(ns);
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < cap) {
    residual = 0.0;
    for (int s = 0; s < ns; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.num_actions; ++a) best = std::max(best, q_value(mdp, v, s, a));
      next[s] = best;
      residual = std::max(residual, std::abs(best - v[s]));
    }
    v.swap(next);
    ++it;
    if (residual < tolerance) break;
  }
  if (residual >= tolerance) {
    throw SolverError("value iteration hit its iteration cap", residual);
  }
  // Policy-iteration polish: exact evaluation removes the O(tol / (1 - gamma))
  // error of the VI iterate so that ties can be detected reliably.
  std::vector<int> policy = greedy(mdp, v, 0.0);
  for (int round = 0; round < 100; ++round) {
    std::vector<double> exact = evaluate_deterministic(mdp, policy);
    std::vector<int> improved = policy;
    bool changed = false;
    for (int s = 0; s < ns; ++s) {
      const double current = q_value(mdp, exact, s, policy[s]);
      for (int a = 0; a < mdp.num_actions; ++a) {
        if (q_value(mdp, exact, s, a) > current + 1e-12) {
          double best = q_value(mdp, exact, s, a);
          int arg = a;
          for (int b = a + 1; b < mdp.num_actions; ++b) {
            if (q_value(mdp, exact, s, b) > best) {
              best = q_value(mdp, exact, s, b);
              arg = b;
            }
          }
          improved[s] = arg;
          changed = true;
          break;
        }
      }
    }
    v = std::move(exact);
    if (!changed) break;
    policy = std::move(improved);
  }

  OptimalValues out;
  out.v = v;
  out.q.resize(static_cast<std::size_t>(ns) * mdp.num_actions);
  out.residual = 0.0;
  for (int s = 0; s < ns; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.num_actions; ++a) {
      const double q = q_value(mdp, v, s, a);
      out.q[static_cast<std::size_t>(s) * mdp.num_actions + a] = q;
      best = std::max(best, q);
    }
    out.residual = std::max(out.residual, std::abs(best - v[s]));
  }
  out.iterations = it;
  return out;
}

std::vector<std::vector<int>> optimal_action_sets(const InducedMdp& mdp,
                                                  const OptimalValues& opt, double slack) {
  std::vector<std::vector<int>> out(mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s) {
    const double* q = opt.q.data() + static_cast<std::size_t>(s) * mdp.num_actions;
    const double best = *std::max_element(q, q + mdp.num_actions);
    for (int a = 0; a < mdp.num_actions; ++a) {
      if (q[a] >= best - slack) out[s].push_back(a);
    }
  }
  return out;
}

SoftSolution solve_soft(const InducedMdp& mdp, double tau, double tolerance) {
  if (!(tau > 0.0)) throw std::invalid_argument("solve_soft: tau must be positive");
  const int ns = mdp.num_states;
  const int na = mdp.num_actions;
  const int cap = iteration_cap(mdp.gamma, tolerance);
  std::vector<double> v(ns, 0.0), next(ns), q(na);
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  auto soft_max = [&](int s, const std::vector<double>& vals) {
    double m = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < na; ++a) {
      q[a] = q_value(mdp, vals, s, a);
      m = std::max(m, q[a]);
    }
    double z = 0.0;
    for (int a = 0; a < na; ++a) z += std::exp((q[a] - m) / tau);
    return m + tau * std::log(z);
  };
  while (it < cap) {
    residual = 0.0;
    for (int s = 0; s < ns; ++s) {
      next[s] = soft_max(s, v);
      residual = std::max(residual, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    ++it;
    if (residual < tolerance) break;
  }
  if (residual >= tolerance) throw SolverError("soft value iteration hit its cap", residual);
  SoftSolution out;
  out.policy.resize(static_cast<std::size_t>(ns) * na);
  for (int s = 0; s < ns; ++s) {
    const double lse = soft_max(s, v);
    for (int a = 0; a < na; ++a) {
      out.policy[static_cast<std::size_t>(s) * na + a] = std::exp((q[a] - lse) / tau);
    }
  }
  out.v = std::move(v);
  out.iterations = it;
  out.residual = residual;
  return out;
}

}  // namespace nashgap
