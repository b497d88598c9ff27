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

#include "nashgap/dynamics.h"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace nashgap {
namespace {

// P_pi(s, s') = sum_a pi(a|s) P(s'|s,a) and the per-state joint distributions.
Eigen::MatrixXd state_transition_matrix(const MarkovGame& game,
                                        const std::vector<std::vector<double>>& joint) {
  const int ns = game.num_states();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(ns, ns);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      const double w = joint[s][a];
      if (w == 0.0) continue;
      const auto row = game.transition_row(s, a);
      for (int t = 0; t < ns; ++t) p(s, t) += w * row[t];
    }
  }
  return p;
}

std::vector<std::vector<double>> all_joint(const ProductPolicy& policy) {
  std::vector<std::vector<double>> out;
  out.reserve(policy.num_states());
  for (int s = 0; s < policy.num_states(); ++s) out.push_back(joint_distribution(policy, s));
  return out;
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& system, const Eigen::VectorXd& rhs,
                              const char* what) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd x = lu.solve(rhs);
  const double residual = (system * x - rhs).lpNorm<Eigen::Infinity>();
  if (!std::isfinite(residual) || residual > tol::kSolveResidual) {
    throw SolverError(std::string(what) + ": linear solve residual too large", residual);
  }
  return x;
}

}  // namespace

std::vector<int> OccupancyPair::visited(double threshold) const {
  return support_of(mu, threshold);
}

OccupancyPair occupancy(const MarkovGame& game, const ProductPolicy& policy) {
  require_compatible(game, policy);
  const int ns = game.num_states();
  const int na = game.num_joint_actions();
  const auto joint = all_joint(policy);
  const Eigen::MatrixXd p = state_transition_matrix(game, joint);
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(ns, ns) - game.gamma() * p.transpose();
  Eigen::VectorXd rhs(ns);
  for (int s = 0; s < ns; ++s) rhs(s) = (1.0 - game.gamma()) * game.initial_dist()[s];
  const Eigen::VectorXd mu = solve_checked(system, rhs, "occupancy");

  OccupancyPair out;
  out.num_joint_actions = na;
  out.mu.assign(mu.data(), mu.data() + ns);
  // Clean round-off so that unreachable states carry exactly zero mass.
  for (auto& m : out.mu) {
    if (std::abs(m) < 1e-15) m = 0.0;
  }
  out.rho.resize(static_cast<std::size_t>(ns) * na);
  for (int s = 0; s < ns; ++s) {
    for (int a = 0; a < na; ++a) {
      out.rho[static_cast<std::size_t>(s) * na + a] = out.mu[s] * joint[s][a];
    }
  }
  return out;
}

ValueBundle values(const MarkovGame& game, const ProductPolicy& policy) {
  require_compatible(game, policy);
  const int ns = game.num_states();
  const int na = game.num_joint_actions();
  const double gamma = game.gamma();
  const auto joint = all_joint(policy);
  const Eigen::MatrixXd p = state_transition_matrix(game, joint);
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(ns, ns) - gamma * p;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);

  ValueBundle out;
  out.num_joint_actions = na;
  for (int i = 0; i < game.num_players(); ++i) {
    Eigen::VectorXd r(ns);
    for (int s = 0; s < ns; ++s) {
      double acc = 0.0;
      for (int a = 0; a < na; ++a) acc += joint[s][a] * game.reward(i, s, a);
      r(s) = acc;
    }
    const Eigen::VectorXd v = lu.solve(r);
    const double residual = (system * v - r).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual) || residual > tol::kSolveResidual) {
      throw SolverError("values: Bellman solve residual too large", residual);
    }
    std::vector<double> vi(v.data(), v.data() + ns);
    std::vector<double> qi(static_cast<std::size_t>(ns) * na);
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        const auto row = game.transition_row(s, a);
        double next = 0.0;
        for (int t = 0; t < ns; ++t) next += row[t] * vi[t];
        qi[static_cast<std::size_t>(s) * na + a] = game.reward(i, s, a) + gamma * next;
      }
    }
    out.v.push_back(std::move(vi));
    out.q.push_back(std::move(qi));
  }

  // Self-check against the occupancy form of the value.
  const OccupancyPair occ = occupancy(game, policy);
  for (int i = 0; i < game.num_players(); ++i) {
    double dot = 0.0;
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) dot += occ.rho_at(s, a) * game.reward(i, s, a);
    }
    const double via_rho = dot / (1.0 - gamma);
    const double direct = value_at_initial(game, out.v[i]);
    if (std::abs(via_rho - direct) > tol::kIdentity) {
      throw SolverError("values: occupancy identity violated", std::abs(via_rho - direct));
    }
  }
  return out;
}

double value_at_initial(const MarkovGame& game, const std::vector<double>& v) {
  double acc = 0.0;
  for (int s = 0; s < game.num_states(); ++s) acc += game.initial_dist()[s] * v[s];
  return acc;
}

std::vector<double> initial_values(const MarkovGame& game, const ProductPolicy& policy) {
  const ValueBundle vb = values(game, policy);
  std::vector<double> out;
  for (const auto& v : vb.v) out.push_back(value_at_initial(game, v));
  return out;
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) acc += std::abs(p[k] - q[k]);
  return acc;
}

double player_bc_error(const std::vector<double>& weights, const ProductPolicy& expert,
                       const ProductPolicy& learner, int player) {
  double acc = 0.0;
  for (int s = 0; s < expert.num_states(); ++s) {
    if (weights[s] == 0.0) continue;
    acc += weights[s] * l1_distance(learner.dist(player, s), expert.dist(player, s));
  }
  return acc;
}

double bc_error(const MarkovGame& game, const ProductPolicy& expert,
                const ProductPolicy& learner) {
  require_compatible(game, expert);
  require_compatible(game, learner);
  const OccupancyPair occ = occupancy(game, expert);
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    worst = std::max(worst, player_bc_error(occ.mu, expert, learner, i));
  }
  return worst;
}

MeasureErrors measure_errors(const MarkovGame& game, const ProductPolicy& expert,
                             const ProductPolicy& learner) {
  const OccupancyPair e = occupancy(game, expert);
  const OccupancyPair l = occupancy(game, learner);
  return {l1_distance(l.mu, e.mu), l1_distance(l.rho, e.rho)};
}

Reconstruction reconstruct_from_rho(const std::vector<double>& rho, int num_states,
                                    int num_joint_actions) {
  if (rho.size() != static_cast<std::size_t>(num_states) * num_joint_actions) {
    throw std::invalid_argument("rho has wrong size");
  }
  Reconstruction out;
  out.policy.resize(num_states);
  for (int s = 0; s < num_states; ++s) {
    const auto row = std::span<const double>(rho).subspan(
        static_cast<std::size_t>(s) * num_joint_actions, num_joint_actions);
    const double mass = std::accumulate(row.begin(), row.end(), 0.0);
    if (mass <= 0.0) continue;
    out.support.push_back(s);
    std::vector<double> cond(row.begin(), row.end());
    for (auto& c : cond) c /= mass;
    out.policy[s] = std::move(cond);
  }
  return out;
}

double pdl_residual(const MarkovGame& game, const ProductPolicy& policy,
                    const ProductPolicy& deviation, int player) {
  const ValueBundle base = values(game, policy);
  const ValueBundle dev = values(game, deviation);
  const double lhs = value_at_initial(game, dev.v[player]) -
                     value_at_initial(game, base.v[player]);
  const OccupancyPair occ = occupancy(game, deviation);
  double adv = 0.0;
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      adv += occ.rho_at(s, a) * (base.q_at(player, s, a) - base.v[player][s]);
    }
  }
  const double rhs = adv / (1.0 - game.gamma());
  return std::abs(lhs - rhs);
}

std::pair<double, double> l1_product_gap(const std::vector<std::vector<double>>& p,
                                         const std::vector<std::vector<double>>& q) {
  if (p.size() != q.size() || p.empty()) {
    throw std::invalid_argument("l1_product_gap: mismatched factor lists");
  }
  std::vector<int> sizes;
  double marginal = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != q[i].size()) throw std::invalid_argument("l1_product_gap: factor size");
    sizes.push_back(static_cast<int>(p[i].size()));
    marginal += l1_distance(p[i], q[i]);
  }
  const JointActionIndexer idx(sizes);
  double joint = 0.0;
  for (int j = 0; j < idx.num_joint(); ++j) {
    double pp = 1.0, qq = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int k = idx.action_of(j, static_cast<int>(i));
      pp *= p[i][k];
      qq *= q[i][k];
    }
    joint += std::abs(pp - qq);
  }
  return {joint, marginal};
}

}  // namespace nashgap
