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

// bilo: equilibria of two-commodity exchange economies with corner endowments.
//
//   bilo solve --concept cournot-walras scenarios/example2.json
//   bilo replicate --mode full --game nash --n 1,2,5,10,100,1000 \
//        scenarios/example2.json --benchmark walras
//   bilo welfare scenarios/example2.json --all-concepts

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bilo/error.hpp"
#include "bilo/report.hpp"
#include "bilo/scenario.hpp"

namespace {

struct Flags {
  std::string scenario;
  std::string kind;
  std::string mode;
  std::string game;
  std::vector<int> n_values;
  double tol = 0.0;
  std::string format;
  std::string out;
  std::string benchmark;
  bool all_concepts = false;
};

template <class T, class Parse>
std::optional<T> keyword(const std::string& value, const char* flag, Parse parse) {
  if (value.empty()) return std::nullopt;
  auto v = parse(value);
  if (!v)
    throw bilo::Error(bilo::ErrorCode::kSchemaError,
                      std::string(flag) + ": unknown value '" + value + "'");
  return v;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("scenario", f.scenario, "scenario JSON file")->required();
  sub->add_option("--concept", f.kind,
                  "walras | cournot | cournot-walras | nash | spne");
  sub->add_option("--mode", f.mode, "partial | full");
  sub->add_option("--game", f.game, "nash | spne");
  sub->add_option("--n", f.n_values, "replica counts, comma separated")
      ->delimiter(',');
  sub->add_option("--tol", f.tol, "absolute and relative tolerance");
  sub->add_option("--format", f.format, "csv | md");
  sub->add_option("--out", f.out, "write tables here instead of stdout");
  sub->add_option("--benchmark", f.benchmark, "concept to compare limits against");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of exchange economies with corner endowments"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"solve", "replicate", "welfare", "compare"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, flags);
    if (std::string(name) == "welfare")
      sub->add_flag("--all-concepts", flags.all_concepts,
                    "tabulate all five concepts");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bilo::kExitSchema;
  }

  bilo::RunOutput result;
  try {
    bilo::Command cmd;
    cmd.name = app.get_subcommands().front()->get_name();
    cmd.kind = keyword<bilo::Concept>(flags.kind, "--concept", bilo::parse_concept);
    cmd.benchmark =
        keyword<bilo::Concept>(flags.benchmark, "--benchmark", bilo::parse_concept);
    cmd.mode = keyword<bilo::ReplicaMode>(flags.mode, "--mode", bilo::parse_mode);
    cmd.game = keyword<bilo::ReplicaGame>(flags.game, "--game", bilo::parse_game);
    cmd.format =
        keyword<bilo::OutputFormat>(flags.format, "--format", bilo::parse_format);
    if (flags.tol != 0.0) cmd.tol = flags.tol;
    for (std::size_t i = 1; i < flags.n_values.size(); ++i)
      if (flags.n_values[i] <= flags.n_values[i - 1])
        throw bilo::Error(bilo::ErrorCode::kSchemaError, "--n: n not increasing");
    cmd.n_values = flags.n_values;
    cmd.all_concepts = flags.all_concepts;
    result = bilo::run(bilo::load_scenario(flags.scenario), cmd);
  } catch (const bilo::Error& e) {
    std::cerr << "bilo: " << e.what() << "\n";
    return bilo::exit_code_for(e.code());
  }

  const std::string text = bilo::render(result.tables, result.format);
  if (flags.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(flags.out, std::ios::binary);
    if (!file) {
      std::cerr << "bilo: cannot write " << flags.out << "\n";
      return bilo::kExitSchema;
    }
    file << text;
  }
  if (!result.error.empty()) std::cerr << "bilo: " << result.error << "\n";
  return result.exit_code;
}
