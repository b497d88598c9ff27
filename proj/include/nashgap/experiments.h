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

#ifndef NASHGAP_EXPERIMENTS_H_
#define NASHGAP_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nashgap/equilibrium.h"
#include "nashgap/game.h"

namespace nashgap {

// (1 - noise) * expert + noise * d per player and state, d ~ Dirichlet(1).
// Deterministic in (seed, noise).
ProductPolicy perturb_policy(const ProductPolicy& expert, double noise, std::uint64_t seed);

// Plug-in estimate of bc_error: expert episodes with Geometric(1 - gamma)
// lengths give an empirical state distribution.
double mc_bc_error(const MarkovGame& game, const ProductPolicy& expert,
                   const ProductPolicy& learner, long long episodes, std::uint64_t seed);

// How best-response drift from the expert is measured.
enum class DistanceMode {
  kGreedy,    // lowest-index optimal deterministic response
  kFarthest,  // optimal response farthest from the expert
  kSoft,      // tau-regularised (softmax) response
};

struct PerturbationRecord {
  double noise = 0.0;
  std::uint64_t seed = 0;
  double eps_bc_exact = 0.0;
  double eps_bc_mc = 0.0;
  std::vector<double> br_dist;  // per player
  double nash_gap = 0.0;
  double bound_value = 0.0;
  bool failed = false;
  std::string error;

  double max_br_dist() const;
};

struct BoundValidationOptions {
  long long episodes = 2000;
  DistanceMode mode = DistanceMode::kGreedy;
  double tau = 0.0;  // used by DistanceMode::kSoft
};

struct BoundValidationRun {
  std::vector<PerturbationRecord> records;  // sorted by noise, then seed
  DeltaCurve delta;                         // tight curve over successful records
  // Cumulative maximum of the Nash gap against eps_bc.
  std::vector<std::pair<double, double>> gap_envelope;
  int failures = 0;
};

BoundValidationRun bound_validation_run(const MarkovGame& game, const ProductPolicy& expert,
                                        const std::vector<double>& noise_levels,
                                        const std::vector<std::uint64_t>& seeds,
                                        const BoundValidationOptions& options = {});

// (2 n eps + delta) / (1 - gamma)^2.
double bound_value(int num_players, double gamma, double eps_bc, double delta);

struct TauCurve {
  double tau = 0.0;
  bool failed = false;
  std::string error;
  DeltaCurve curve;
  std::vector<double> on_grid;  // curve evaluated on the sweep's shared grid
  double expert_nash_gap = 0.0;
  std::vector<PerturbationRecord> records;
};

struct SweepResult {
  std::vector<double> eps_grid;
  std::vector<TauCurve> curves;
};

struct SweepOptions {
  long long episodes = 0;  // 0 skips the Monte-Carlo column
  DistanceMode mode = DistanceMode::kGreedy;
};

// Regularised equilibrium per tau, then the perturbation protocol around it.
SweepResult temperature_sweep(const MarkovGame& game, const std::vector<double>& taus,
                              const std::vector<double>& noise_levels,
                              const std::vector<std::uint64_t>& seeds,
                              const std::vector<double>& eps_grid,
                              const SweepOptions& options = {});

std::vector<double> linspace(double lo, double hi, int count);

// CSV writers: 12 significant digits, header always present.
std::string records_csv(const std::vector<PerturbationRecord>& records);
std::string curves_csv(const std::vector<double>& eps_grid, const std::vector<TauCurve>& curves);
std::string delta_csv(double tau, const DeltaCurve& curve);

struct ExperimentConfig {
  std::string game = "tag";  // fixture name, "tag", or a game-file path
  std::optional<double> gamma;
  double tau = 0.1;
  std::vector<double> taus;
  double noise_min = 0.0;
  double noise_max = 0.4;
  int noise_count = 100;
  std::vector<std::uint64_t> seeds{0};
  long long episodes = 2000;
  double eps_grid_min = 0.0;
  double eps_grid_max = 0.0;  // 0: smallest per-curve largest eps_bc
  int eps_grid_count = 50;
  DistanceMode mode = DistanceMode::kGreedy;
  std::string output;        // records (bound validation) or curves (sweep)
  std::string delta_output;  // optional delta curve of a bound-validation run
};

// Throws ParseError on malformed documents.
ExperimentConfig parse_experiment_config(const std::string& text);

}  // namespace nashgap

#endif  // NASHGAP_EXPERIMENTS_H_
