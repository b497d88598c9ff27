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

#include "nashgap/game_io.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nashgap {
namespace {

using nlohmann::json;

const json& field(const json& doc, const std::string& name, const std::string& path = "") {
  if (!doc.is_object()) throw ParseError(path.empty() ? "/" : path, "expected an object");
  auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(path + "/" + name, "missing required field");
  return *it;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

// Flattens a nested numeric array of the given shape, row-major.
void flatten(const json& v, std::span<const int> shape, const std::string& path,
             std::vector<double>& out) {
  if (shape.empty()) {
    out.push_back(as_double(v, path));
    return;
  }
  if (!v.is_array()) throw ParseError(path, "expected an array");
  if (static_cast<int>(v.size()) != shape[0]) {
    throw ParseError(path, "expected " + std::to_string(shape[0]) + " entries, found " +
                               std::to_string(v.size()));
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    flatten(v[k], shape.subspan(1), path + "/" + std::to_string(k), out);
  }
}

std::vector<int> int_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  std::vector<int> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(as_int(v[k], path + "/" + std::to_string(k)));
  }
  return out;
}

json nest(std::span<const double> flat, std::span<const int> shape) {
  if (shape.size() == 1) return json(std::vector<double>(flat.begin(), flat.end()));
  json out = json::array();
  std::size_t block = 1;
  for (std::size_t k = 1; k < shape.size(); ++k) block *= shape[k];
  for (int k = 0; k < shape[0]; ++k) {
    out.push_back(nest(flat.subspan(k * block, block), shape.subspan(1)));
  }
  return out;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string save_game(const MarkovGame& game) {
  const int ns = game.num_states();
  const int na = game.num_joint_actions();
  json doc;
  doc["n_players"] = game.num_players();
  doc["n_states"] = ns;
  doc["action_counts"] = game.action_counts();
  doc["joint_action_order"] = kJointActionOrder;
  doc["gamma"] = game.gamma();
  doc["initial_dist"] = std::vector<double>(game.initial_dist().begin(),
                                            game.initial_dist().end());
  const int tshape[] = {ns, na, ns};
  doc["transitions"] = nest(game.transitions(), tshape);
  const int rshape[] = {game.num_players(), ns, na};
  doc["rewards"] = nest(game.rewards(), rshape);
  return doc.dump(1) + "\n";
}

MarkovGame load_game(const std::string& text) {
  const json doc = parse(text);
  const int n_players = as_int(field(doc, "n_players"), "/n_players");
  const int n_states = as_int(field(doc, "n_states"), "/n_states");
  if (n_players < 1) throw ParseError("/n_players", "must be >= 1");
  if (n_states < 1) throw ParseError("/n_states", "must be >= 1");
  const auto counts = int_list(field(doc, "action_counts"), "/action_counts");
  if (static_cast<int>(counts.size()) != n_players) {
    throw ParseError("/action_counts", "expected one count per player");
  }
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 1) throw ParseError("/action_counts/" + std::to_string(k), "must be >= 1");
  }
  const auto& order = field(doc, "joint_action_order");
  if (!order.is_string() || order.get<std::string>() != kJointActionOrder) {
    throw ParseError("/joint_action_order", std::string("must be \"") + kJointActionOrder + "\"");
  }
  const double gamma = as_double(field(doc, "gamma"), "/gamma");
  const int na = JointActionIndexer(counts).num_joint();

  std::vector<double> nu0;
  const int nshape[] = {n_states};
  flatten(field(doc, "initial_dist"), nshape, "/initial_dist", nu0);
  std::vector<double> transitions;
  const int tshape[] = {n_states, na, n_states};
  flatten(field(doc, "transitions"), tshape, "/transitions", transitions);
  std::vector<double> rewards;
  const int rshape[] = {n_players, n_states, na};
  flatten(field(doc, "rewards"), rshape, "/rewards", rewards);
  return make_valid_game(n_states, counts, std::move(transitions), std::move(rewards),
                         std::move(nu0), gamma);
}

std::string save_policy(const ProductPolicy& policy) {
  json doc;
  doc["n_players"] = policy.num_players();
  doc["n_states"] = policy.num_states();
  doc["action_counts"] = policy.action_counts();
  json tables = json::array();
  for (int i = 0; i < policy.num_players(); ++i) {
    const int shape[] = {policy.num_states(), policy.num_actions(i)};
    tables.push_back(nest(policy.table(i), shape));
  }
  doc["policy"] = std::move(tables);
  return doc.dump(1) + "\n";
}

ProductPolicy load_policy(const std::string& text) {
  const json doc = parse(text);
  const int n_players = as_int(field(doc, "n_players"), "/n_players");
  const int n_states = as_int(field(doc, "n_states"), "/n_states");
  const auto counts = int_list(field(doc, "action_counts"), "/action_counts");
  if (static_cast<int>(counts.size()) != n_players) {
    throw ParseError("/action_counts", "expected one count per player");
  }
  const auto& tables_doc = field(doc, "policy");
  if (!tables_doc.is_array() || static_cast<int>(tables_doc.size()) != n_players) {
    throw ParseError("/policy", "expected one table per player");
  }
  std::vector<std::vector<double>> tables;
  for (int i = 0; i < n_players; ++i) {
    std::vector<double> t;
    const int shape[] = {n_states, counts[i]};
    flatten(tables_doc[i], shape, "/policy/" + std::to_string(i), t);
    tables.push_back(std::move(t));
  }
  ProductPolicy policy(n_states, counts, std::move(tables));
  auto violations = validate_policy(policy);
  if (!violations.empty()) {
    std::string first = "invalid policy: " + violations.front();
    throw ValidationError(std::move(first), std::move(violations));
  }
  return policy;
}

std::string save_bimatrix(const BimatrixGame& game) {
  json doc;
  const int shape[] = {game.rows, game.cols};
  doc["A1"] = nest(game.a1, shape);
  doc["A2"] = nest(game.a2, shape);
  return doc.dump(1) + "\n";
}

BimatrixGame load_bimatrix(const std::string& text) {
  const json doc = parse(text);
  const auto& a1 = field(doc, "A1");
  if (!a1.is_array() || a1.empty() || !a1[0].is_array()) {
    throw ParseError("/A1", "expected a nested numeric list");
  }
  const int shape[] = {static_cast<int>(a1.size()), static_cast<int>(a1[0].size())};
  std::vector<double> m1, m2;
  flatten(a1, shape, "/A1", m1);
  flatten(field(doc, "A2"), shape, "/A2", m2);
  return BimatrixGame(shape[0], shape[1], std::move(m1), std::move(m2));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace nashgap
