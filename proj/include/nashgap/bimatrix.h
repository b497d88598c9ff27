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

#ifndef NASHGAP_BIMATRIX_H_
#define NASHGAP_BIMATRIX_H_

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nashgap/game.h"

namespace nashgap {

struct SupportSolveResult {
  bool feasible = false;          // indifference LP has a solution
  bool best_response_ok = false;  // off-support actions do not beat it by > eps
  MixedProfile profile;           // valid when feasible
  double gain1 = 0.0;
  double gain2 = 0.0;

  bool is_equilibrium() const { return feasible && best_response_ok; }
};

// Indifference linear program on supports (nu1, nu2) with slack eps:
//   x, y on the simplex restricted to the supports,
//   |(A2[:, j] - A2[:, k])^T x| <= eps for j, k in nu2,
//   |(A1[j, :] - A1[k, :]) y|   <= eps for j, k in nu1.
// Among feasible points the one maximising the smallest support weight is
// returned. The result is then checked for eps-best-response validity.
SupportSolveResult bimatrix_support_solve(const BimatrixGame& game, const std::vector<int>& nu1,
                                          const std::vector<int>& nu2, double eps);

// Every distinct eps-Nash profile found by support enumeration (dedup at
// L-infinity distance 1e-7). At most 8 actions per player.
std::vector<MixedProfile> enumerate_nash(const BimatrixGame& game, double eps);

inline constexpr double kEmptyBand = std::numeric_limits<double>::infinity();

// Brute-force tight Nash-gap lower bound of a 2x2 game: the smallest one-shot
// Nash gap over grid profiles whose joint L1 distance to some equilibrium is
// within grid_step of eps_rho. Returns kEmptyBand when no grid point qualifies.
double m_rho_bruteforce(const BimatrixGame& game, double eps_rho, double grid_step);

using MRhoOracle = std::function<double(const BimatrixGame&, double)>;

struct OracleCall {
  int player = 0;      // 1 or 2, 0 for the baseline query
  int action = -1;     // row/column replaced by K
  double delta = 0.0;
  double bound = 0.0;  // oracle answer l
  bool included = false;
  bool near_threshold = false;  // |l - s| within twice the margin
};

struct SupportRecoveryResult {
  std::vector<int> nu1;
  std::vector<int> nu2;
  double k = 0.0;
  double delta = 0.0;
  double baseline = 0.0;  // s
  double scale = 1.0;     // payoff scale applied before running
  double margin = 0.0;
  std::vector<OracleCall> log;
  bool ok() const { return !nu1.empty() && !nu2.empty(); }
};

// Lower-bound reduction: knock out one action at a time (payoffs set to K)
// and keep it in the support when the oracle's bound rises above the
// baseline by more than `margin`. Games with max |entry| >= 1 are halved
// (and eps halved) first.
SupportRecoveryResult support_recovery(const BimatrixGame& game, double eps,
                                       const MRhoOracle& oracle, double margin);

// Convenience overload with the brute-force oracle at `grid_step` and
// margin 2 * grid_step.
SupportRecoveryResult support_recovery(const BimatrixGame& game, double eps,
                                       double grid_step = 0.005);

}  // namespace nashgap

#endif  // NASHGAP_BIMATRIX_H_
