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

#ifndef NASHGAP_SIMPLEX_LP_H_
#define NASHGAP_SIMPLEX_LP_H_

#include <vector>

namespace nashgap {

// Small dense linear program
//   maximise c^T z  subject to  rows (<=, =, >=) and z >= 0,
// solved by a two-phase tableau simplex with Bland's rule.
class LinearProgram {
 public:
  enum class Sense { kLessEqual, kEqual, kGreaterEqual };
  enum class Status { kOptimal, kInfeasible, kUnbounded };

  explicit LinearProgram(int num_vars) : num_vars_(num_vars), objective_(num_vars, 0.0) {}

  void add_constraint(std::vector<double> coefficients, Sense sense, double rhs);
  void set_objective(std::vector<double> coefficients);

  int num_vars() const { return num_vars_; }
  int num_constraints() const { return static_cast<int>(rows_.size()); }

  struct Result {
    Status status = Status::kInfeasible;
    std::vector<double> z;
    double objective = 0.0;
    int pivots = 0;
  };
  Result solve(double tolerance = 1e-11) const;

 private:
  struct Row {
    std::vector<double> a;
    Sense sense;
    double b;
  };
  int num_vars_;
  std::vector<double> objective_;
  std::vector<Row> rows_;
};

}  // namespace nashgap

#endif  // NASHGAP_SIMPLEX_LP_H_
