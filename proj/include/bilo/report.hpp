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

#ifndef BILO_REPORT_HPP_
#define BILO_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "bilo/equilibrium.hpp"
#include "bilo/replica.hpp"
#include "bilo/scenario.hpp"

namespace bilo {

struct OutputTable {
  std::string title;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  // Columns holding numbers; right-aligned in Markdown.
  std::vector<bool> numeric;
};

std::string format_number(double v, int decimals = 6);

// CSV: one RFC 4180 block (CRLF line ends) per table, blocks separated by an
// empty line. Markdown: a "### title" heading and a padded pipe table.
std::string render(const std::vector<OutputTable>& tables, OutputFormat format);

// Command-line request; set fields override the scenario's run section.
struct Command {
  std::string name;  // solve | replicate | welfare | compare
  std::optional<Concept> kind;
  std::optional<ReplicaMode> mode;
  std::optional<ReplicaGame> game;
  std::vector<int> n_values;
  std::optional<double> tol;
  std::optional<OutputFormat> format;
  std::optional<Concept> benchmark;
  bool all_concepts = false;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitSchema = 2,
  kExitSolver = 3,
  kExitVerification = 4,
};

struct RunOutput {
  std::vector<OutputTable> tables;
  OutputFormat format = OutputFormat::kCsv;
  int exit_code = kExitOk;
  std::string error;  // empty on success
};

int exit_code_for(ErrorCode code);

// Dispatches the command. Library errors are caught and reported with the
// concept and n they occurred at; tables produced before a failure are kept.
RunOutput run(const Scenario& scenario, const Command& command);

}  // namespace bilo

#endif  // BILO_REPORT_HPP_
