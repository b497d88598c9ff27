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

#include "nashgap/simplex_lp.h"

#include <cmath>
#include <stdexcept>

namespace nashgap {
namespace {

// Tableau with m constraint rows and one objective row (last). Columns are
// the variables followed by the right-hand side.
struct Tableau {
  int m = 0;
  int n = 0;  // variable columns
  std::vector<double> t;
  std::vector<int> basis;

  double& at(int r, int c) { return t[static_cast<std::size_t>(r) * (n + 1) + c]; }
  double at(int r, int c) const { return t[static_cast<std::size_t>(r) * (n + 1) + c]; }
  double& rhs(int r) { return at(r, n); }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= n; ++c) at(pr, c) /= p;
    for (int r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= n; ++c) at(r, c) -= f * at(pr, c);
    }
    basis[pr] = pc;
  }

  // Objective row holds reduced costs of a minimisation: entering column is
  // the lowest index with a negative reduced cost (Bland).
  LinearProgram::Status run(const std::vector<bool>& allowed, double tol, int& pivots) {
    for (;;) {
      int enter = -1;
      for (int c = 0; c < n; ++c) {
        if (allowed[c] && at(m, c) < -tol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return LinearProgram::Status::kOptimal;
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < m; ++r) {
        if (at(r, enter) > tol) {
          const double ratio = at(r, n) / at(r, enter);
          if (leave < 0 || ratio < best - tol ||
              (std::abs(ratio - best) <= tol && basis[r] < basis[leave])) {
            leave = r;
            best = ratio;
          }
        }
      }
      if (leave < 0) return LinearProgram::Status::kUnbounded;
      pivot(leave, enter);
      ++pivots;
      if (pivots > 100000) throw std::runtime_error("simplex: pivot limit exceeded");
    }
  }
};

}  // namespace

void LinearProgram::add_constraint(std::vector<double> coefficients, Sense sense, double rhs) {
  if (static_cast<int>(coefficients.size()) != num_vars_) {
    throw std::invalid_argument("constraint has wrong number of coefficients");
  }
  rows_.push_back({std::move(coefficients), sense, rhs});
}

void LinearProgram::set_objective(std::vector<double> coefficients) {
  if (static_cast<int>(coefficients.size()) != num_vars_) {
    throw std::invalid_argument("objective has wrong number of coefficients");
  }
  objective_ = std::move(coefficients);
}

LinearProgram::Result LinearProgram::solve(double tolerance) const {
  const int m = num_constraints();
  // Normalise to b >= 0, then count slack/surplus and artificial columns.
  std::vector<Row> rows = rows_;
  for (auto& row : rows) {
    if (row.b < 0.0) {
      for (auto& v : row.a) v = -v;
      row.b = -row.b;
      if (row.sense == Sense::kLessEqual) {
        row.sense = Sense::kGreaterEqual;
      } else if (row.sense == Sense::kGreaterEqual) {
        row.sense = Sense::kLessEqual;
      }
    }
  }
  int num_slack = 0;
  for (const auto& row : rows) {
    if (row.sense != Sense::kEqual) ++num_slack;
  }
  const int num_art = m;  // one artificial per row keeps phase one uniform
  Tableau tab;
  tab.m = m;
  tab.n = num_vars_ + num_slack + num_art;
  tab.t.assign(static_cast<std::size_t>(m + 1) * (tab.n + 1), 0.0);
  tab.basis.assign(m, -1);
  int slack = num_vars_;
  const int art0 = num_vars_ + num_slack;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < num_vars_; ++c) tab.at(r, c) = rows[r].a[c];
    if (rows[r].sense == Sense::kLessEqual) {
      tab.at(r, slack++) = 1.0;
    } else if (rows[r].sense == Sense::kGreaterEqual) {
      tab.at(r, slack++) = -1.0;
    }
    tab.at(r, art0 + r) = 1.0;
    tab.rhs(r) = rows[r].b;
    tab.basis[r] = art0 + r;
  }
  // Phase one: minimise the sum of artificials.
  for (int c = 0; c <= tab.n; ++c) {
    double acc = 0.0;
    for (int r = 0; r < m; ++r) acc += tab.at(r, c);
    tab.at(m, c) = (c >= art0 && c < tab.n) ? 0.0 : -acc;
  }
  Result result;
  std::vector<bool> allowed(tab.n, true);
  tab.run(allowed, tolerance, result.pivots);
  if (-tab.at(m, tab.n) > 1e-9) {
    result.status = Status::kInfeasible;
    return result;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < art0) continue;
    for (int c = 0; c < art0; ++c) {
      if (std::abs(tab.at(r, c)) > tolerance) {
        tab.pivot(r, c);
        ++result.pivots;
        break;
      }
    }
  }
  for (int c = art0; c < tab.n; ++c) allowed[c] = false;

  // Phase two: minimise -c^T z.
  for (int c = 0; c <= tab.n; ++c) tab.at(m, c) = 0.0;
  for (int c = 0; c < num_vars_; ++c) tab.at(m, c) = -objective_[c];
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis[r];
    const double f = tab.at(m, b);
    if (f == 0.0) continue;
    for (int c = 0; c <= tab.n; ++c) tab.at(m, c) -= f * tab.at(r, c);
  }
  result.status = tab.run(allowed, tolerance, result.pivots);
  result.z.assign(num_vars_, 0.0);
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < num_vars_) result.z[tab.basis[r]] = std::max(0.0, tab.rhs(r));
  }
  double obj = 0.0;
  for (int c = 0; c < num_vars_; ++c) obj += objective_[c] * result.z[c];
  result.objective = obj;
  return result;
}

}  // namespace nashgap
