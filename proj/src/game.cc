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

#include "nashgap/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace nashgap {
namespace {

std::string where(const std::string& table, std::initializer_list<int> idx) {
  std::ostringstream out;
  out << table << "[";
  bool first = true;
  for (int i : idx) {
    if (!first) out << "][";
    out << i;
    first = false;
  }
  out << "]";
  return out.str();
}

void check_distribution(std::span<const double> p, const std::string& label,
                        std::vector<std::string>& out) {
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] >= 0.0)) {
      std::ostringstream msg;
      msg << label << " entry " << k << " is negative or NaN (" << p[k] << ")";
      out.push_back(msg.str());
    }
    sum += p[k];
  }
  if (!(std::abs(sum - 1.0) <= tol::kStochastic)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << label << " sums to " << sum << ", expected 1";
    out.push_back(msg.str());
  }
}

std::vector<double> dirichlet_row(std::mt19937_64& rng, int n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& v : w) {
    v = expo(rng);
    total += v;
  }
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace

JointActionIndexer::JointActionIndexer(std::vector<int> action_counts)
    : counts_(std::move(action_counts)), strides_(counts_.size()) {
  int stride = 1;
  for (int i = static_cast<int>(counts_.size()) - 1; i >= 0; --i) {
    if (counts_[i] < 1) throw std::invalid_argument("action count must be >= 1");
    strides_[i] = stride;
    stride *= counts_[i];
  }
  num_joint_ = stride;
}

int JointActionIndexer::encode(std::span<const int> actions) const {
  if (actions.size() != counts_.size()) {
    throw std::invalid_argument("joint action has wrong number of players");
  }
  int joint = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= counts_[i]) {
      throw std::out_of_range("action index out of range");
    }
    joint = joint * counts_[i] + actions[i];
  }
  return joint;
}

std::vector<int> JointActionIndexer::decode(int joint) const {
  std::vector<int> out(counts_.size());
  for (int i = 0; i < num_players(); ++i) out[i] = action_of(joint, i);
  return out;
}

MarkovGame::MarkovGame(int num_states, std::vector<int> action_counts,
                       std::vector<double> transitions, std::vector<double> rewards,
                       std::vector<double> initial_dist, double gamma)
    : num_states_(num_states),
      joint_(std::move(action_counts)),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      initial_dist_(std::move(initial_dist)),
      gamma_(gamma) {
  if (num_states_ < 1) throw std::invalid_argument("n_states must be >= 1");
  if (joint_.num_players() < 1) throw std::invalid_argument("n_players must be >= 1");
  const std::size_t na = joint_.num_joint();
  const std::size_t ns = num_states_;
  if (transitions_.size() != ns * na * ns) {
    throw std::invalid_argument("transition table has wrong size");
  }
  if (rewards_.size() != joint_.num_players() * ns * na) {
    throw std::invalid_argument("reward table has wrong size");
  }
  if (initial_dist_.size() != ns) {
    throw std::invalid_argument("initial distribution has wrong size");
  }
}

bool MarkovGame::is_zero_sum(double tolerance) const {
  if (num_players() != 2) return false;
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_joint_actions(); ++a) {
      if (std::abs(reward(0, s, a) + reward(1, s, a)) > tolerance) return false;
    }
  }
  return true;
}

std::vector<std::string> validate_game(const MarkovGame& game) {
  std::vector<std::string> out;
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      check_distribution(game.transition_row(s, a), where("transitions", {s, a}), out);
    }
  }
  for (int i = 0; i < game.num_players(); ++i) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int a = 0; a < game.num_joint_actions(); ++a) {
        const double r = game.reward(i, s, a);
        if (!(r >= -1.0 && r <= 1.0)) {
          std::ostringstream msg;
          msg << where("rewards", {i, s, a}) << " = " << r << " outside [-1, 1]";
          out.push_back(msg.str());
        }
      }
    }
  }
  check_distribution(game.initial_dist(), "initial_dist", out);
  if (!(game.gamma() >= 0.0 && game.gamma() < 1.0)) {
    std::ostringstream msg;
    msg << "gamma = " << game.gamma() << " outside [0, 1)";
    out.push_back(msg.str());
  }
  return out;
}

MarkovGame make_valid_game(int num_states, std::vector<int> action_counts,
                           std::vector<double> transitions,
                           std::vector<double> rewards,
                           std::vector<double> initial_dist, double gamma) {
  MarkovGame game(num_states, std::move(action_counts), std::move(transitions),
                  std::move(rewards), std::move(initial_dist), gamma);
  auto violations = validate_game(game);
  if (!violations.empty()) {
    std::string first = "invalid game: " + violations.front();
    throw ValidationError(std::move(first), std::move(violations));
  }
  return game;
}

ProductPolicy::ProductPolicy(int num_states, std::vector<int> action_counts,
                             std::vector<std::vector<double>> tables)
    : num_states_(num_states), counts_(std::move(action_counts)), tables_(std::move(tables)) {
  if (tables_.size() != counts_.size()) {
    throw std::invalid_argument("policy has wrong number of players");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (tables_[i].size() != static_cast<std::size_t>(num_states_) * counts_[i]) {
      throw std::invalid_argument("policy table " + std::to_string(i) + " has wrong size");
    }
  }
}

ProductPolicy ProductPolicy::constant(int num_states, std::vector<int> action_counts,
                                      std::span<const int> actions) {
  std::vector<std::vector<int>> per_state(action_counts.size());
  for (std::size_t i = 0; i < action_counts.size(); ++i) {
    per_state[i].assign(num_states, actions[i]);
  }
  return deterministic(num_states, std::move(action_counts), per_state);
}

ProductPolicy ProductPolicy::uniform(int num_states, std::vector<int> action_counts) {
  std::vector<std::vector<double>> tables;
  for (int c : action_counts) {
    tables.emplace_back(static_cast<std::size_t>(num_states) * c, 1.0 / c);
  }
  return ProductPolicy(num_states, std::move(action_counts), std::move(tables));
}

ProductPolicy ProductPolicy::deterministic(int num_states, std::vector<int> action_counts,
                                           const std::vector<std::vector<int>>& actions) {
  std::vector<std::vector<double>> tables;
  for (std::size_t i = 0; i < action_counts.size(); ++i) {
    std::vector<double> t(static_cast<std::size_t>(num_states) * action_counts[i], 0.0);
    for (int s = 0; s < num_states; ++s) {
      const int a = actions.at(i).at(s);
      if (a < 0 || a >= action_counts[i]) throw std::out_of_range("action out of range");
      t[static_cast<std::size_t>(s) * action_counts[i] + a] = 1.0;
    }
    tables.push_back(std::move(t));
  }
  return ProductPolicy(num_states, std::move(action_counts), std::move(tables));
}

ProductPolicy ProductPolicy::with_player(int player, std::vector<double> table) const {
  ProductPolicy out = *this;
  if (table.size() != out.tables_.at(player).size()) {
    throw std::invalid_argument("replacement policy table has wrong size");
  }
  out.tables_[player] = std::move(table);
  return out;
}

ProductPolicy ProductPolicy::with_player_from(int player, const ProductPolicy& other) const {
  return with_player(player, other.table(player));
}

bool ProductPolicy::compatible_with(const MarkovGame& game) const {
  return num_states_ == game.num_states() && counts_ == game.action_counts();
}

std::vector<std::string> validate_policy(const ProductPolicy& policy) {
  std::vector<std::string> out;
  for (int i = 0; i < policy.num_players(); ++i) {
    for (int s = 0; s < policy.num_states(); ++s) {
      check_distribution(policy.dist(i, s), where("policy", {i, s}), out);
    }
  }
  return out;
}

void require_compatible(const MarkovGame& game, const ProductPolicy& policy) {
  if (!policy.compatible_with(game)) {
    throw std::invalid_argument("policy shape does not match the game");
  }
}

std::vector<double> joint_distribution(const ProductPolicy& policy, int s) {
  const JointActionIndexer idx(policy.action_counts());
  std::vector<double> out(idx.num_joint(), 1.0);
  for (int a = 0; a < idx.num_joint(); ++a) {
    for (int i = 0; i < idx.num_players(); ++i) {
      out[a] *= policy.prob(i, s, idx.action_of(a, i));
    }
  }
  return out;
}

MarkovGame random_game(std::uint64_t seed, int num_players, int num_states,
                       const std::vector<int>& action_counts, double gamma) {
  if (num_players < 1 || num_states < 1 ||
      static_cast<int>(action_counts.size()) != num_players) {
    throw std::invalid_argument("random_game: invalid sizes");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("random_game: gamma");
  const JointActionIndexer idx(action_counts);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const std::size_t ns = num_states;
  const std::size_t na = idx.num_joint();
  std::vector<double> transitions(ns * na * ns);
  for (std::size_t row = 0; row < ns * na; ++row) {
    double total = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
      transitions[row * ns + k] = unit(rng);
      total += transitions[row * ns + k];
    }
    for (std::size_t k = 0; k < ns; ++k) transitions[row * ns + k] /= total;
  }
  std::vector<double> rewards(num_players * ns * na);
  for (auto& r : rewards) r = sym(rng);
  std::vector<double> nu0(ns, 1.0 / num_states);
  return make_valid_game(num_states, action_counts, std::move(transitions),
                         std::move(rewards), std::move(nu0), gamma);
}

ProductPolicy random_policy(std::uint64_t seed, int num_states,
                            const std::vector<int>& action_counts) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> tables;
  for (int c : action_counts) {
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(num_states) * c);
    for (int s = 0; s < num_states; ++s) {
      auto row = dirichlet_row(rng, c);
      t.insert(t.end(), row.begin(), row.end());
    }
    tables.push_back(std::move(t));
  }
  return ProductPolicy(num_states, action_counts, std::move(tables));
}

BimatrixGame::BimatrixGame(int rows_, int cols_, std::vector<double> a1_,
                           std::vector<double> a2_)
    : rows(rows_), cols(cols_), a1(std::move(a1_)), a2(std::move(a2_)) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (rows < 1 || cols < 1 || a1.size() != n || a2.size() != n) {
    throw std::invalid_argument("bimatrix payoff matrices must share a rows x cols shape");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(a1[k]) || !std::isfinite(a2[k])) {
      throw std::invalid_argument("bimatrix payoffs must be finite");
    }
  }
}

double BimatrixGame::max_abs_entry() const {
  double m = 0.0;
  for (double v : a1) m = std::max(m, std::abs(v));
  for (double v : a2) m = std::max(m, std::abs(v));
  return m;
}

BimatrixGame BimatrixGame::scaled(double factor) const {
  BimatrixGame out = *this;
  for (auto& v : out.a1) v *= factor;
  for (auto& v : out.a2) v *= factor;
  return out;
}

std::vector<int> support_of(std::span<const double> weights, double threshold) {
  std::vector<int> out;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] > threshold) out.push_back(static_cast<int>(k));
  }
  return out;
}

std::vector<int> MixedProfile::support1() const { return support_of(x); }
std::vector<int> MixedProfile::support2() const { return support_of(y); }

std::pair<double, double> bimatrix_gains(const BimatrixGame& game,
                                         const MixedProfile& profile) {
  double current1 = 0.0, current2 = 0.0;
  double best1 = -std::numeric_limits<double>::infinity();
  double best2 = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < game.rows; ++r) {
    double v = 0.0;
    for (int c = 0; c < game.cols; ++c) v += game.payoff1(r, c) * profile.y[c];
    best1 = std::max(best1, v);
    current1 += profile.x[r] * v;
  }
  for (int c = 0; c < game.cols; ++c) {
    double v = 0.0;
    for (int r = 0; r < game.rows; ++r) v += game.payoff2(r, c) * profile.x[r];
    best2 = std::max(best2, v);
    current2 += profile.y[c] * v;
  }
  return {best1 - current1, best2 - current2};
}

}  // namespace nashgap
