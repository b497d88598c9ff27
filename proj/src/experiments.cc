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

#include "nashgap/experiments.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "nashgap/dynamics.h"
#include "nashgap/game_io.h"
#include "nashgap/mdp.h"
#include "nashgap/regularized.h"

namespace nashgap {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::mt19937_64 seeded(std::uint64_t seed, double noise) {
  const auto bits = std::bit_cast<std::uint64_t>(noise);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(bits), static_cast<std::uint32_t>(bits >> 32)};
  return std::mt19937_64(seq);
}

int sample(std::span<const double> probs, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  const int n = static_cast<int>(probs.size());
  for (int k = 0; k < n; ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  // Round-off: fall back to the last action with positive mass.
  for (int k = n - 1; k >= 0; --k) {
    if (probs[k] > 0.0) return k;
  }
  return n - 1;
}

std::vector<double> br_distances_for(const MarkovGame& game, const ProductPolicy& expert,
                                     const ProductPolicy& policy, DistanceMode mode,
                                     double tau) {
  switch (mode) {
    case DistanceMode::kGreedy:
      return br_distances(game, expert, policy, BrSelection::kLowestIndex);
    case DistanceMode::kFarthest:
      return br_distances(game, expert, policy, BrSelection::kFarthest);
    case DistanceMode::kSoft:
      return soft_br_distances(game, expert, policy, tau);
  }
  return {};
}

std::vector<std::pair<double, double>> cumulative_max(std::vector<std::pair<double, double>> v) {
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = -std::numeric_limits<double>::infinity();
  for (auto& p : v) {
    best = std::max(best, p.second);
    p.second = best;
  }
  return v;
}

}  // namespace

ProductPolicy perturb_policy(const ProductPolicy& expert, double noise, std::uint64_t seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw std::invalid_argument("noise must be in [0, 1]");
  std::mt19937_64 rng = seeded(seed, noise);
  std::gamma_distribution<double> unit(1.0, 1.0);
  std::vector<std::vector<double>> tables;
  for (int i = 0; i < expert.num_players(); ++i) {
    const int na = expert.num_actions(i);
    std::vector<double> table(expert.table(i));
    std::vector<double> d(na);
    for (int s = 0; s < expert.num_states(); ++s) {
      double total = 0.0;
      for (double& x : d) total += (x = unit(rng));
      for (int a = 0; a < na; ++a) {
        double& p = table[static_cast<std::size_t>(s) * na + a];
        p = (1.0 - noise) * p + noise * (d[a] / total);
      }
    }
    tables.push_back(std::move(table));
  }
  return ProductPolicy(expert.num_states(), expert.action_counts(), std::move(tables));
}

double mc_bc_error(const MarkovGame& game, const ProductPolicy& expert,
                   const ProductPolicy& learner, long long episodes, std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  require_compatible(game, expert);
  require_compatible(game, learner);
  std::mt19937_64 rng(seed);
  std::geometric_distribution<long long> length(1.0 - game.gamma());
  const int np = game.num_players();
  const JointActionIndexer& idx = game.joint();
  std::vector<double> counts(game.num_states(), 0.0);
  std::vector<int> actions(np);
  double total = 0.0;
  for (long long e = 0; e < episodes; ++e) {
    int s = sample(game.initial_dist(), rng);
    const long long steps = length(rng) + 1;
    for (long long t = 0; t < steps; ++t) {
      counts[s] += 1.0;
      total += 1.0;
      if (t + 1 == steps) break;
      for (int i = 0; i < np; ++i) actions[i] = sample(expert.dist(i, s), rng);
      s = sample(game.transition_row(s, idx.encode(actions)), rng);
    }
  }
  for (double& c : counts) c /= total;
  double worst = 0.0;
  for (int i = 0; i < np; ++i) worst = std::max(worst, player_bc_error(counts, expert, learner, i));
  return worst;
}

double PerturbationRecord::max_br_dist() const {
  double m = 0.0;
  for (double d : br_dist) m = std::max(m, d);
  return m;
}

double bound_value(int num_players, double gamma, double eps_bc, double delta) {
  return (2.0 * num_players * eps_bc + delta) / ((1.0 - gamma) * (1.0 - gamma));
}

BoundValidationRun bound_validation_run(const MarkovGame& game, const ProductPolicy& expert,
                                        const std::vector<double>& noise_levels,
                                        const std::vector<std::uint64_t>& seeds,
                                        const BoundValidationOptions& options) {
  require_compatible(game, expert);
  std::vector<double> noise(noise_levels);
  std::sort(noise.begin(), noise.end());
  std::vector<std::uint64_t> seed_order(seeds);
  std::sort(seed_order.begin(), seed_order.end());

  BoundValidationRun run;
  for (double eta : noise) {
    for (std::uint64_t seed : seed_order) {
      PerturbationRecord rec;
      rec.noise = eta;
      rec.seed = seed;
      try {
        const ProductPolicy pi = perturb_policy(expert, eta, seed);
        rec.eps_bc_exact = bc_error(game, expert, pi);
        rec.eps_bc_mc = options.episodes > 0
                            ? mc_bc_error(game, expert, pi, options.episodes, seed)
                            : kNaN;
        rec.br_dist = br_distances_for(game, expert, pi, options.mode, options.tau);
        rec.nash_gap = nash_gap(game, pi);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
        rec.br_dist.assign(game.num_players(), kNaN);
        rec.nash_gap = kNaN;
        ++run.failures;
      }
      run.records.push_back(std::move(rec));
    }
  }

  std::vector<std::pair<double, double>> samples;
  std::vector<std::pair<double, double>> gaps;
  for (const auto& r : run.records) {
    if (r.failed) continue;
    samples.emplace_back(r.eps_bc_exact, r.max_br_dist());
    gaps.emplace_back(r.eps_bc_exact, r.nash_gap);
  }
  if (!samples.empty()) run.delta = tight_delta(samples);
  run.gap_envelope = cumulative_max(std::move(gaps));
  for (auto& r : run.records) {
    r.bound_value = r.failed ? kNaN
                             : bound_value(game.num_players(), game.gamma(), r.eps_bc_exact,
                                           run.delta(r.eps_bc_exact));
  }
  return run;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) out[k] = lo + (hi - lo) * k / (count - 1);
  out.back() = hi;
  return out;
}

SweepResult temperature_sweep(const MarkovGame& game, const std::vector<double>& taus,
                              const std::vector<double>& noise_levels,
                              const std::vector<std::uint64_t>& seeds,
                              const std::vector<double>& eps_grid, const SweepOptions& options) {
  if (game.num_players() != 2 || !game.is_zero_sum()) {
    throw std::invalid_argument("temperature_sweep needs a two-player zero-sum game");
  }
  SweepResult out;
  out.eps_grid = eps_grid;
  for (double tau : taus) {
    TauCurve tc;
    tc.tau = tau;
    try {
      const RegularizedNash eq = regularized_nash_vi(game, tau);
      tc.expert_nash_gap = nash_gap(game, eq.policy);
      BoundValidationOptions opts{options.episodes, options.mode, tau};
      BoundValidationRun run = bound_validation_run(game, eq.policy, noise_levels, seeds, opts);
      tc.curve = run.delta;
      tc.records = std::move(run.records);
    } catch (const std::exception& e) {
      tc.failed = true;
      tc.error = e.what();
    }
    out.curves.push_back(std::move(tc));
  }
  if (out.eps_grid.empty()) {
    // Shared grid up to where every curve still has data.
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& c : out.curves) {
      if (c.failed || c.curve.breakpoints().empty()) continue;
      hi = std::min(hi, c.curve.breakpoints().back().first);
    }
    if (std::isinf(hi)) hi = 0.0;
    out.eps_grid = linspace(0.0, hi, 50);
  }
  for (auto& c : out.curves) {
    c.on_grid.clear();
    for (double e : out.eps_grid) c.on_grid.push_back(c.failed ? kNaN : c.curve(e));
  }
  return out;
}

std::string records_csv(const std::vector<PerturbationRecord>& records) {
  std::ostringstream os;
  os << "noise,seed,eps_bc_exact,eps_bc_mc,br_dist_p1,br_dist_p2,nash_gap,bound_value\n";
  for (const auto& r : records) {
    const double d1 = r.br_dist.size() > 0 ? r.br_dist[0] : kNaN;
    const double d2 = r.br_dist.size() > 1 ? r.br_dist[1] : kNaN;
    os << fmt(r.noise) << ',' << r.seed << ',' << fmt(r.eps_bc_exact) << ','
       << fmt(r.eps_bc_mc) << ',' << fmt(d1) << ',' << fmt(d2) << ',' << fmt(r.nash_gap) << ','
       << fmt(r.bound_value) << '\n';
  }
  return os.str();
}

std::string curves_csv(const std::vector<double>& eps_grid, const std::vector<TauCurve>& curves) {
  std::ostringstream os;
  os << "tau,eps_grid,delta_value\n";
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < eps_grid.size(); ++k) {
      const double v = k < c.on_grid.size() ? c.on_grid[k] : c.curve(eps_grid[k]);
      os << fmt(c.tau) << ',' << fmt(eps_grid[k]) << ',' << fmt(v) << '\n';
    }
  }
  return os.str();
}

std::string delta_csv(double tau, const DeltaCurve& curve) {
  std::ostringstream os;
  os << "tau,eps_grid,delta_value\n";
  for (const auto& [e, d] : curve.breakpoints()) {
    os << fmt(tau) << ',' << fmt(e) << ',' << fmt(d) << '\n';
  }
  return os.str();
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", "config must be an object");
  static const char* const kKnown[] = {"game",   "gamma",        "tau",     "taus",
                                       "noise",  "seeds",        "episodes", "eps_grid",
                                       "br_mode", "output",      "delta_output"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw ParseError("/" + key, "unknown field");
    }
  }
  ExperimentConfig c;
  try {
    if (doc.contains("game")) c.game = doc["game"].get<std::string>();
    if (doc.contains("gamma")) c.gamma = doc["gamma"].get<double>();
    if (doc.contains("tau")) c.tau = doc["tau"].get<double>();
    if (doc.contains("taus")) c.taus = doc["taus"].get<std::vector<double>>();
    if (doc.contains("noise")) {
      const json& n = doc["noise"];
      c.noise_min = n.value("min", c.noise_min);
      c.noise_max = n.value("max", c.noise_max);
      c.noise_count = n.value("count", c.noise_count);
    }
    if (doc.contains("seeds")) {
      const json& s = doc["seeds"];
      if (s.is_number_integer()) {
        c.seeds.clear();
        for (std::uint64_t k = 0; k < s.get<std::uint64_t>(); ++k) c.seeds.push_back(k);
      } else {
        c.seeds = s.get<std::vector<std::uint64_t>>();
      }
    }
    if (doc.contains("episodes")) c.episodes = doc["episodes"].get<long long>();
    if (doc.contains("eps_grid")) {
      const json& g = doc["eps_grid"];
      c.eps_grid_min = g.value("min", c.eps_grid_min);
      c.eps_grid_max = g.value("max", c.eps_grid_max);
      c.eps_grid_count = g.value("count", c.eps_grid_count);
    }
    if (doc.contains("br_mode")) {
      const auto m = doc["br_mode"].get<std::string>();
      if (m == "greedy") {
        c.mode = DistanceMode::kGreedy;
      } else if (m == "farthest") {
        c.mode = DistanceMode::kFarthest;
      } else if (m == "soft") {
        c.mode = DistanceMode::kSoft;
      } else {
        throw ParseError("/br_mode", "expected greedy, farthest or soft");
      }
    }
    if (doc.contains("output")) c.output = doc["output"].get<std::string>();
    if (doc.contains("delta_output")) c.delta_output = doc["delta_output"].get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError("", std::string("bad field type: ") + e.what());
  }
  if (c.noise_count < 1) throw ParseError("/noise/count", "must be >= 1");
  if (c.noise_min < 0.0 || c.noise_max > 1.0 || c.noise_min > c.noise_max) {
    throw ParseError("/noise", "need 0 <= min <= max <= 1");
  }
  if (c.seeds.empty()) throw ParseError("/seeds", "at least one seed");
  if (c.episodes < 0) throw ParseError("/episodes", "must be >= 0");
  if (c.eps_grid_count < 1) throw ParseError("/eps_grid/count", "must be >= 1");
  return c;
}

}  // namespace nashgap
