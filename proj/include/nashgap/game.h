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

#ifndef NASHGAP_GAME_H_
#define NASHGAP_GAME_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nashgap {

// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double kStochastic = 1e-12;     // row sums of P, nu0, policies
inline constexpr double kSimplex = 1e-10;        // mixed profiles
inline constexpr double kSupport = 1e-9;         // weight counted as zero below this
inline constexpr double kSolveResidual = 1e-10;  // dense linear solves, VI residual
inline constexpr double kIdentity = 1e-8;        // value identities, Nash checks
inline constexpr double kOccupancy = 1e-9;       // mu / rho consistency
}  // namespace tol

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> violations)
      : std::runtime_error(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Joint actions are flattened row-major with player 0 as the slowest-varying
// index, i.e. a = ((a_0 * |A_1| + a_1) * |A_2| + a_2) ...
class JointActionIndexer {
 public:
  JointActionIndexer() = default;
  explicit JointActionIndexer(std::vector<int> action_counts);

  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_joint() const { return num_joint_; }
  int count(int player) const { return counts_[player]; }
  const std::vector<int>& counts() const { return counts_; }

  // Own action of `player` inside joint action `joint`.
  int action_of(int joint, int player) const {
    return (joint / strides_[player]) % counts_[player];
  }
  int encode(std::span<const int> actions) const;
  std::vector<int> decode(int joint) const;
  // Joint index with `player`'s component replaced by `action`.
  int with_action(int joint, int player, int action) const {
    return joint + (action - action_of(joint, player)) * strides_[player];
  }

  bool operator==(const JointActionIndexer&) const = default;

 private:
  std::vector<int> counts_;
  std::vector<int> strides_;
  int num_joint_ = 0;
};

// Tabular n-player discounted Markov game. Immutable after construction.
class MarkovGame {
 public:
  MarkovGame() = default;
  // transitions: [s][joint][s'], rewards: [i][s][joint], both flat row-major.
  MarkovGame(int num_states, std::vector<int> action_counts,
             std::vector<double> transitions, std::vector<double> rewards,
             std::vector<double> initial_dist, double gamma);

  int num_players() const { return joint_.num_players(); }
  int num_states() const { return num_states_; }
  int num_joint_actions() const { return joint_.num_joint(); }
  int num_actions(int player) const { return joint_.count(player); }
  const std::vector<int>& action_counts() const { return joint_.counts(); }
  const JointActionIndexer& joint() const { return joint_; }
  double gamma() const { return gamma_; }

  double transition(int s, int a, int next) const {
    return transitions_[(static_cast<std::size_t>(s) * num_joint_actions() + a) *
                            num_states_ + next];
  }
  std::span<const double> transition_row(int s, int a) const {
    return {transitions_.data() +
                (static_cast<std::size_t>(s) * num_joint_actions() + a) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }
  double reward(int player, int s, int a) const {
    return rewards_[(static_cast<std::size_t>(player) * num_states_ + s) *
                        num_joint_actions() + a];
  }
  std::span<const double> initial_dist() const { return initial_dist_; }

  const std::vector<double>& transitions() const { return transitions_; }
  const std::vector<double>& rewards() const { return rewards_; }

  // True when r_0 = -r_1 entrywise within `tolerance` (two-player only).
  bool is_zero_sum(double tolerance = tol::kStochastic) const;

  bool operator==(const MarkovGame&) const = default;

 private:
  int num_states_ = 0;
  JointActionIndexer joint_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
  std::vector<double> initial_dist_;
  double gamma_ = 0.0;
};

// Every invariant breach of `game`, each naming the table and indices.
std::vector<std::string> validate_game(const MarkovGame& game);

// Like the constructor but throws ValidationError when validate_game fails.
MarkovGame make_valid_game(int num_states, std::vector<int> action_counts,
                           std::vector<double> transitions,
                           std::vector<double> rewards,
                           std::vector<double> initial_dist, double gamma);

// Per-player state-conditioned action distributions pi_i(a_i | s).
class ProductPolicy {
 public:
  ProductPolicy() = default;
  // tables[i] is flat [s][a_i].
  ProductPolicy(int num_states, std::vector<int> action_counts,
                std::vector<std::vector<double>> tables);

  // Every player plays a fixed action in every state.
  static ProductPolicy constant(int num_states, std::vector<int> action_counts,
                                std::span<const int> actions);
  static ProductPolicy uniform(int num_states, std::vector<int> action_counts);
  // actions[i][s] is player i's action in state s.
  static ProductPolicy deterministic(
      int num_states, std::vector<int> action_counts,
      const std::vector<std::vector<int>>& actions);

  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_states() const { return num_states_; }
  int num_actions(int player) const { return counts_[player]; }
  const std::vector<int>& action_counts() const { return counts_; }

  double prob(int player, int s, int action) const {
    return tables_[player][static_cast<std::size_t>(s) * counts_[player] + action];
  }
  std::span<const double> dist(int player, int s) const {
    return {tables_[player].data() + static_cast<std::size_t>(s) * counts_[player],
            static_cast<std::size_t>(counts_[player])};
  }
  const std::vector<double>& table(int player) const { return tables_[player]; }

  // Copy with player `player`'s component replaced.
  ProductPolicy with_player(int player, std::vector<double> table) const;
  ProductPolicy with_player_from(int player, const ProductPolicy& other) const;

  bool compatible_with(const MarkovGame& game) const;

  bool operator==(const ProductPolicy&) const = default;

 private:
  int num_states_ = 0;
  std::vector<int> counts_;
  std::vector<std::vector<double>> tables_;
};

std::vector<std::string> validate_policy(const ProductPolicy& policy);

// pi(a | s) for every joint action a, as the product of the player marginals.
std::vector<double> joint_distribution(const ProductPolicy& policy, int s);

// Throws std::invalid_argument unless policy shapes match the game.
void require_compatible(const MarkovGame& game, const ProductPolicy& policy);

// Random instance: transitions uniform then row-normalised, rewards uniform in
// [-1, 1], uniform nu0. Pure function of its arguments.
MarkovGame random_game(std::uint64_t seed, int num_players, int num_states,
                       const std::vector<int>& action_counts, double gamma);

// Random product policy with Dirichlet(1) rows.
ProductPolicy random_policy(std::uint64_t seed, int num_states,
                            const std::vector<int>& action_counts);

// One-state two-player game; payoff(row, col) for each player.
struct BimatrixGame {
  int rows = 0;
  int cols = 0;
  std::vector<double> a1;  // row-major rows x cols, payoff of the row player
  std::vector<double> a2;  // row-major rows x cols, payoff of the column player

  BimatrixGame() = default;
  BimatrixGame(int rows, int cols, std::vector<double> a1, std::vector<double> a2);

  double payoff1(int r, int c) const { return a1[static_cast<std::size_t>(r) * cols + c]; }
  double payoff2(int r, int c) const { return a2[static_cast<std::size_t>(r) * cols + c]; }
  double max_abs_entry() const;
  BimatrixGame scaled(double factor) const;
};

struct MixedProfile {
  std::vector<double> x;  // row player
  std::vector<double> y;  // column player

  std::vector<int> support1() const;
  std::vector<int> support2() const;
};

std::vector<int> support_of(std::span<const double> weights,
                            double threshold = tol::kSupport);

// Exploitability of a mixed profile in the one-shot game, per player.
std::pair<double, double> bimatrix_gains(const BimatrixGame& game,
                                         const MixedProfile& profile);

}  // namespace nashgap

#endif  // NASHGAP_GAME_H_
