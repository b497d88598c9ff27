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

#include "nashgap/regularized.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nashgap {
namespace {

// In-place: logits -> probabilities, returns log-normaliser.
double normalise_logits(std::vector<double>& logits, std::vector<double>& probs) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - m);
  const double lse = m + std::log(z);
  probs.resize(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    logits[k] -= lse;
    probs[k] = std::exp(logits[k]);
  }
  return lse;
}

void row_payoffs(const std::vector<double>& a, int rows, int cols, const std::vector<double>& y,
                 std::vector<double>& out) {
  out.assign(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out[r] += a[static_cast<std::size_t>(r) * cols + c] * y[c];
  }
}

void col_payoffs(const std::vector<double>& a, int rows, int cols, const std::vector<double>& x,
                 std::vector<double>& out) {
  out.assign(cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out[c] += a[static_cast<std::size_t>(r) * cols + c] * x[r];
  }
}

double softmax_distance(const std::vector<double>& p, const std::vector<double>& scores,
                        double scale) {
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp((s - m) * scale);
  double worst = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    worst = std::max(worst, std::abs(p[k] - std::exp((scores[k] - m) * scale) / z));
  }
  return worst;
}

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double stage_residual(const std::vector<double>& a, int rows, int cols, double tau,
                      const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> ay, atx;
  row_payoffs(a, rows, cols, y, ay);
  col_payoffs(a, rows, cols, x, atx);
  for (auto& v : atx) v = -v;
  return std::max(softmax_distance(x, ay, 1.0 / tau), softmax_distance(y, atx, 1.0 / tau));
}

}  // namespace

StageSolution solve_regularized_stage(const std::vector<double>& payoff, int rows, int cols,
                                      double tau, std::vector<double> x, std::vector<double> y,
                                      double tolerance, int max_iterations) {
  if (!(tau > 0.0)) throw std::invalid_argument("regularised stage game needs tau > 0");
  if (static_cast<int>(x.size()) != rows) x.assign(rows, 1.0 / rows);
  if (static_cast<int>(y.size()) != cols) y.assign(cols, 1.0 / cols);
  double max_abs = 0.0;
  for (double v : payoff) max_abs = std::max(max_abs, std::abs(v));

  // Predictive update in log space: each step is a softmax fixed-point step
  // damped by (1 - eta * tau), which contracts at rate (1 - eta * tau) for
  // eta <= 1 / (tau + 2 max|A|).
  const double eta = 1.0 / (tau + 2.0 * max_abs);
  const double keep = 1.0 - eta * tau;
  std::vector<double> lx(rows), ly(cols), lxb(rows), lyb(cols), xb, yb, ay, atx;
  for (int r = 0; r < rows; ++r) lx[r] = std::log(std::max(x[r], 1e-300));
  for (int c = 0; c < cols; ++c) ly[c] = std::log(std::max(y[c], 1e-300));

  StageSolution out;
  double residual = stage_residual(payoff, rows, cols, tau, x, y);
  int it = 0;
  while (residual >= tolerance && it < max_iterations) {
    row_payoffs(payoff, rows, cols, y, ay);
    col_payoffs(payoff, rows, cols, x, atx);
    for (int r = 0; r < rows; ++r) lxb[r] = keep * lx[r] + eta * ay[r];
    for (int c = 0; c < cols; ++c) lyb[c] = keep * ly[c] - eta * atx[c];
    normalise_logits(lxb, xb);
    normalise_logits(lyb, yb);
    row_payoffs(payoff, rows, cols, yb, ay);
    col_payoffs(payoff, rows, cols, xb, atx);
    for (int r = 0; r < rows; ++r) lx[r] = keep * lx[r] + eta * ay[r];
    for (int c = 0; c < cols; ++c) ly[c] = keep * ly[c] - eta * atx[c];
    normalise_logits(lx, x);
    normalise_logits(ly, y);
    residual = stage_residual(payoff, rows, cols, tau, x, y);
    ++it;
  }
  row_payoffs(payoff, rows, cols, y, ay);
  double bilinear = 0.0;
  for (int r = 0; r < rows; ++r) bilinear += x[r] * ay[r];
  out.value = bilinear + tau * entropy(x) - tau * entropy(y);
  out.residual = residual;
  out.iterations = it;
  out.x = std::move(x);
  out.y = std::move(y);
  return out;
}

RegularizedNash regularized_nash_vi(const MarkovGame& game, double tau,
                                    const RegularizedNashOptions& options) {
  if (game.num_players() != 2 || !game.is_zero_sum(tol::kStochastic)) {
    throw std::invalid_argument("regularized_nash_vi needs a two-player zero-sum game");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("regularized_nash_vi needs tau > 0");
  const int ns = game.num_states();
  const int rows = game.num_actions(0);
  const int cols = game.num_actions(1);
  const double gamma = game.gamma();
  std::vector<double> v(ns, 0.0), next(ns, 0.0);
  std::vector<std::vector<double>> xs(ns), ys(ns);
  std::vector<double> q(static_cast<std::size_t>(rows) * cols);

  auto stage_payoff = [&](int s, const std::vector<double>& vals) {
    for (int a = 0; a < rows * cols; ++a) {
      const auto row = game.transition_row(s, a);
      double cont = 0.0;
      for (int t = 0; t < ns; ++t) cont += row[t] * vals[t];
      q[a] = game.reward(0, s, a) + gamma * cont;
    }
  };

  RegularizedNash out;
  double change = std::numeric_limits<double>::infinity();
  int sweep = 0;
  while (change >= options.outer_tolerance && sweep < options.max_sweeps) {
    change = 0.0;
    for (int s = 0; s < ns; ++s) {
      stage_payoff(s, v);
      StageSolution st = solve_regularized_stage(q, rows, cols, tau, xs[s], ys[s],
                                                 options.inner_tolerance,
                                                 options.max_inner_iterations);
      if (st.residual >= options.inner_tolerance) {
        throw SolverError("regularised stage game did not converge", st.residual);
      }
      next[s] = st.value;
      change = std::max(change, std::abs(next[s] - v[s]));
      xs[s] = std::move(st.x);
      ys[s] = std::move(st.y);
    }
    v.swap(next);
    ++sweep;
  }
  if (change >= options.outer_tolerance) {
    throw SolverError("regularised Nash value iteration hit its sweep cap", change);
  }

  // Final profile is the stage equilibrium under the converged values.
  std::vector<double> t0, t1;
  double worst = 0.0;
  for (int s = 0; s < ns; ++s) {
    stage_payoff(s, v);
    StageSolution st = solve_regularized_stage(q, rows, cols, tau, xs[s], ys[s],
                                               options.inner_tolerance,
                                               options.max_inner_iterations);
    worst = std::max(worst, st.residual);
    t0.insert(t0.end(), st.x.begin(), st.x.end());
    t1.insert(t1.end(), st.y.begin(), st.y.end());
  }
  out.policy = ProductPolicy(ns, game.action_counts(), {std::move(t0), std::move(t1)});
  out.values = std::move(v);
  out.sweeps = sweep;
  out.outer_residual = change;
  out.stage_residual = worst;
  return out;
}

}  // namespace nashgap
