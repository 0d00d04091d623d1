// Copyright 2026 The bilo Authors
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

#ifndef BILO_SCENARIO_HPP_
#define BILO_SCENARIO_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bilo/cournot.hpp"
#include "bilo/economy.hpp"
#include "bilo/equilibrium.hpp"
#include "bilo/numerics.hpp"
#include "bilo/replica.hpp"

namespace bilo {

enum class OutputFormat { kCsv, kMarkdown };

std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view name);
std::optional<ReplicaMode> parse_mode(std::string_view name);
std::optional<ReplicaGame> parse_game(std::string_view name);

// Optional run parameters stored with the economy; command-line flags take
// precedence.
struct RunSpec {
  std::optional<Concept> kind;
  std::optional<ReplicaMode> mode;
  std::optional<ReplicaGame> game;
  std::vector<int> n_values;
  std::optional<Concept> benchmark;
  std::optional<OutputFormat> format;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct Scenario {
  std::string description;
  std::vector<Agent> agents;
  // Stands in for the buyers in the partial-equilibrium Cournot game.
  std::optional<LinearInverseDemand> inverse_demand;
  RunSpec run;
  Tolerance tolerance;
  // concept -> quantity -> closed-form text, shown next to solver output.
  std::map<std::string, std::map<std::string, std::string>> exact;

  // Throws SchemaError when the agents do not form a valid economy.
  Economy economy() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Validates the whole document. Errors are SchemaError with the line of a
// syntax error or the JSON pointer of the offending field.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

// Inverse of parse_scenario: parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

}  // namespace bilo

#endif  // BILO_SCENARIO_HPP_
