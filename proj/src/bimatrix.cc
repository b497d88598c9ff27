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

#include "nashgap/bimatrix.h"

#include <algorithm>
#include <cmath>

#include "nashgap/simplex_lp.h"

namespace nashgap {
namespace {

using Sense = LinearProgram::Sense;

void add_band(LinearProgram& lp, std::vector<double> coeffs, double eps) {
  if (eps == 0.0) {
    lp.add_constraint(std::move(coeffs), Sense::kEqual, 0.0);
    return;
  }
  lp.add_constraint(coeffs, Sense::kLessEqual, eps);
  lp.add_constraint(std::move(coeffs), Sense::kGreaterEqual, -eps);
}

std::vector<std::vector<int>> nonempty_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int k = 0; k < n; ++k) {
      if (mask & (1 << k)) s.push_back(k);
    }
    out.push_back(std::move(s));
  }
  return out;
}

double linf(const MixedProfile& a, const MixedProfile& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k) d = std::max(d, std::abs(a.x[k] - b.x[k]));
  for (std::size_t k = 0; k < a.y.size(); ++k) d = std::max(d, std::abs(a.y[k] - b.y[k]));
  return d;
}

double joint_l1(const MixedProfile& a, const MixedProfile& b) {
  double d = 0.0;
  for (std::size_t r = 0; r < a.x.size(); ++r) {
    for (std::size_t c = 0; c < a.y.size(); ++c) {
      d += std::abs(a.x[r] * a.y[c] - b.x[r] * b.y[c]);
    }
  }
  return d;
}

}  // namespace

SupportSolveResult bimatrix_support_solve(const BimatrixGame& game, const std::vector<int>& nu1,
                                          const std::vector<int>& nu2, double eps) {
  if (nu1.empty() || nu2.empty()) throw std::invalid_argument("supports must be nonempty");
  if (!(eps >= 0.0)) throw std::invalid_argument("slack eps must be >= 0");
  for (int r : nu1) {
    if (r < 0 || r >= game.rows) throw std::out_of_range("row support index");
  }
  for (int c : nu2) {
    if (c < 0 || c >= game.cols) throw std::out_of_range("column support index");
  }
  const int n1 = static_cast<int>(nu1.size());
  const int n2 = static_cast<int>(nu2.size());
  const int nv = n1 + n2 + 1;  // x, y, t
  LinearProgram lp(nv);

  std::vector<double> row(nv, 0.0);
  for (int k = 0; k < n1; ++k) row[k] = 1.0;
  lp.add_constraint(row, Sense::kEqual, 1.0);
  std::fill(row.begin(), row.end(), 0.0);
  for (int k = 0; k < n2; ++k) row[n1 + k] = 1.0;
  lp.add_constraint(row, Sense::kEqual, 1.0);

  // Column player indifferent across nu2 given x.
  for (int j = 0; j < n2; ++j) {
    for (int k = j + 1; k < n2; ++k) {
      std::fill(row.begin(), row.end(), 0.0);
      for (int r = 0; r < n1; ++r) {
        row[r] = game.payoff2(nu1[r], nu2[j]) - game.payoff2(nu1[r], nu2[k]);
      }
      add_band(lp, row, eps);
    }
  }
  // Row player indifferent across nu1 given y.
  for (int j = 0; j < n1; ++j) {
    for (int k = j + 1; k < n1; ++k) {
      std::fill(row.begin(), row.end(), 0.0);
      for (int c = 0; c < n2; ++c) {
        row[n1 + c] = game.payoff1(nu1[j], nu2[c]) - game.payoff1(nu1[k], nu2[c]);
      }
      add_band(lp, row, eps);
    }
  }
  for (int k = 0; k < n1 + n2; ++k) {
    std::fill(row.begin(), row.end(), 0.0);
    row[k] = 1.0;
    row[nv - 1] = -1.0;
    lp.add_constraint(row, Sense::kGreaterEqual, 0.0);
  }
  std::vector<double> objective(nv, 0.0);
  objective[nv - 1] = 1.0;
  lp.set_objective(std::move(objective));

  SupportSolveResult out;
  const auto res = lp.solve();
  if (res.status != LinearProgram::Status::kOptimal) return out;
  out.feasible = true;
  out.profile.x.assign(game.rows, 0.0);
  out.profile.y.assign(game.cols, 0.0);
  double sx = 0.0, sy = 0.0;
  for (int k = 0; k < n1; ++k) sx += res.z[k];
  for (int k = 0; k < n2; ++k) sy += res.z[n1 + k];
  for (int k = 0; k < n1; ++k) out.profile.x[nu1[k]] = res.z[k] / sx;
  for (int k = 0; k < n2; ++k) out.profile.y[nu2[k]] = res.z[n1 + k] / sy;
  const auto [g1, g2] = bimatrix_gains(game, out.profile);
  out.gain1 = g1;
  out.gain2 = g2;
  out.best_response_ok = g1 <= eps + tol::kSupport && g2 <= eps + tol::kSupport;
  return out;
}

std::vector<MixedProfile> enumerate_nash(const BimatrixGame& game, double eps) {
  if (game.rows > 8 || game.cols > 8) {
    throw std::invalid_argument("enumerate_nash: at most 8 actions per player");
  }
  std::vector<MixedProfile> found;
  const auto rows = nonempty_subsets(game.rows);
  const auto cols = nonempty_subsets(game.cols);
  for (const auto& nu1 : rows) {
    for (const auto& nu2 : cols) {
      const auto res = bimatrix_support_solve(game, nu1, nu2, eps);
      if (!res.is_equilibrium()) continue;
      const bool dup = std::any_of(found.begin(), found.end(), [&](const MixedProfile& p) {
        return linf(p, res.profile) <= 1e-7;
      });
      if (!dup) found.push_back(res.profile);
    }
  }
  return found;
}

double m_rho_bruteforce(const BimatrixGame& game, double eps_rho, double grid_step) {
  if (game.rows != 2 || game.cols != 2) {
    throw std::invalid_argument("m_rho_bruteforce: only 2x2 games are supported");
  }
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw std::invalid_argument("m_rho_bruteforce: grid_step must be in (0, 0.1]");
  }
  const auto equilibria = enumerate_nash(game, 0.0);
  const int cells = static_cast<int>(std::llround(1.0 / grid_step));
  double best = kEmptyBand;
  MixedProfile candidate{{0.0, 0.0}, {0.0, 0.0}};
  auto consider = [&](const MixedProfile& eq, const MixedProfile& p) {
    if (std::abs(joint_l1(p, eq) - eps_rho) > grid_step) return;
    const auto [g1, g2] = bimatrix_gains(game, p);
    best = std::min(best, std::max(g1, g2));
  };
  for (const auto& eq : equilibria) {
    consider(eq, eq);
    for (int i = 0; i <= cells; ++i) {
      const double p = std::min(1.0, i * grid_step);
      candidate.x = {p, 1.0 - p};
      for (int j = 0; j <= cells; ++j) {
        const double q = std::min(1.0, j * grid_step);
        candidate.y = {q, 1.0 - q};
        consider(eq, candidate);
      }
    }
  }
  return best;
}

SupportRecoveryResult support_recovery(const BimatrixGame& input, double eps,
                                       const MRhoOracle& oracle, double margin) {
  if (!(eps > 0.0)) throw std::invalid_argument("support_recovery: eps must be positive");
  SupportRecoveryResult out;
  BimatrixGame game = input;
  while (game.max_abs_entry() >= 1.0) {
    game = game.scaled(0.5);
    eps *= 0.5;
    out.scale *= 0.5;
  }
  out.margin = margin;
  out.k = -(1.0 + game.max_abs_entry()) / 2.0;
  out.delta = eps / std::abs(out.k);
  out.baseline = oracle(game, out.delta);
  out.log.push_back({0, -1, out.delta, out.baseline, false, false});

  auto decide = [&](int player, int action, const BimatrixGame& modified) {
    const double l = oracle(modified, out.delta);
    OracleCall call{player, action, out.delta, l, false, false};
    call.included = std::isinf(l) || l > out.baseline + margin;
    call.near_threshold = !std::isinf(l) && std::abs(l - out.baseline) <= 2.0 * margin;
    out.log.push_back(call);
    return call.included;
  };

  BimatrixGame working1 = game;
  for (int i = 0; i < game.rows; ++i) {
    BimatrixGame trial = working1;
    for (int c = 0; c < game.cols; ++c) trial.a1[static_cast<std::size_t>(i) * game.cols + c] = out.k;
    BimatrixGame query = game;
    query.a1 = trial.a1;
    if (decide(1, i, query)) {
      out.nu1.push_back(i);
    } else {
      working1 = std::move(trial);
    }
  }
  BimatrixGame working2 = game;
  for (int j = 0; j < game.cols; ++j) {
    BimatrixGame trial = working2;
    for (int r = 0; r < game.rows; ++r) trial.a2[static_cast<std::size_t>(r) * game.cols + j] = out.k;
    BimatrixGame query = game;
    query.a2 = trial.a2;
    if (decide(2, j, query)) {
      out.nu2.push_back(j);
    } else {
      working2 = std::move(trial);
    }
  }
  return out;
}

SupportRecoveryResult support_recovery(const BimatrixGame& game, double eps, double grid_step) {
  auto oracle = [grid_step](const BimatrixGame& g, double delta) {
    return m_rho_bruteforce(g, delta, grid_step);
  };
  return support_recovery(game, eps, oracle, 2.0 * grid_step);
}

}  // namespace nashgap
