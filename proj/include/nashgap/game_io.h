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

#ifndef NASHGAP_GAME_IO_H_
#define NASHGAP_GAME_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "nashgap/game.h"

namespace nashgap {

// Malformed document. `field` is a JSON-pointer-like path ("/transitions/0/1").
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline constexpr const char* kJointActionOrder = "player1_slowest";

// Game file: JSON object with n_players, n_states, action_counts, gamma,
// initial_dist, transitions[s][joint_a][s'], rewards[i][s][joint_a] and
// joint_action_order = "player1_slowest". Numbers use 17 significant digits.
std::string save_game(const MarkovGame& game);
MarkovGame load_game(const std::string& text);

// Policy file: n_players, n_states, action_counts and policy[i][s][a_i].
std::string save_policy(const ProductPolicy& policy);
ProductPolicy load_policy(const std::string& text);

// Bimatrix file: {"A1": [[...]], "A2": [[...]]}.
std::string save_bimatrix(const BimatrixGame& game);
BimatrixGame load_bimatrix(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace nashgap

#endif  // NASHGAP_GAME_IO_H_
