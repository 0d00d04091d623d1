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

#include "bilo/scenario.hpp"

#include <fstream>
#include <sstream>

#include "bilo/error.hpp"
#include "json.hpp"

namespace bilo {
namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kSchemaError, where + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where + "/" + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

template <class T, class Parse>
T keyword(const json& j, const std::string& where, Parse parse) {
  const std::string name = text(j, where);
  const std::optional<T> value = parse(name);
  if (!value) schema_error(where, "unknown value '" + name + "'");
  return *value;
}

UtilityFunction parse_utility(const json& j, const std::string& where) {
  const std::string family = text(field(j, "family", where), where + "/family");
  const json& params = field(j, "params", where);
  const std::string pw = where + "/params";
  UtilityFunction u;
  if (family == "log_quasi_linear") {
    u = LogQuasiLinear{number(field(params, "a", pw), pw + "/a")};
  } else if (family == "quad_quasi_linear") {
    u = QuadQuasiLinear{number(field(params, "alpha", pw), pw + "/alpha"),
                        number(field(params, "beta", pw), pw + "/beta")};
  } else {
    schema_error(where + "/family", "unknown utility family '" + family + "'");
  }
  try {
    validate_utility(u);
  } catch (const Error& err) {
    schema_error(pw, err.what());
  }
  return u;
}

// Agents without an id get their position in the list.
Agent parse_agent(const json& j, const std::string& where, std::size_t position) {
  Agent a;
  a.id = position;
  if (j.contains("id")) {
    if (!j["id"].is_number_unsigned())
      schema_error(where + "/id", "expected a non-negative integer");
    a.id = j["id"].get<std::size_t>();
  }
  const std::string role = text(field(j, "role", where), where + "/role");
  if (role == "seller") a.role = Role::kSeller;
  else if (role == "buyer") a.role = Role::kBuyer;
  else schema_error(where + "/role", "role must be seller or buyer");
  const json& end = field(j, "endowment", where);
  a.endowment = {number(field(end, "x", where + "/endowment"), where + "/endowment/x"),
                 number(field(end, "y", where + "/endowment"), where + "/endowment/y")};
  if (j.contains("weight")) a.weight = number(j["weight"], where + "/weight");
  a.utility = parse_utility(field(j, "utility", where), where + "/utility");
  const bool corner = a.role == Role::kSeller
                          ? a.endowment.x > 0.0 && a.endowment.y == 0.0
                          : a.endowment.x == 0.0 && a.endowment.y > 0.0;
  if (!corner) schema_error(where + "/endowment", "corner endowment violated");
  try {
    validate_agent(a);
  } catch (const Error& err) {
    schema_error(where, err.what());
  }
  return a;
}

RunSpec parse_run(const json& j) {
  RunSpec r;
  if (!j.is_object()) schema_error("/run", "expected an object");
  if (j.contains("concept"))
    r.kind = keyword<Concept>(j["concept"], "/run/concept", parse_concept);
  if (j.contains("benchmark"))
    r.benchmark = keyword<Concept>(j["benchmark"], "/run/benchmark", parse_concept);
  if (j.contains("mode"))
    r.mode = keyword<ReplicaMode>(j["mode"], "/run/mode", parse_mode);
  if (j.contains("game"))
    r.game = keyword<ReplicaGame>(j["game"], "/run/game", parse_game);
  if (j.contains("format"))
    r.format = keyword<OutputFormat>(j["format"], "/run/format", parse_format);
  if (j.contains("n_values")) {
    const json& ns = j["n_values"];
    if (!ns.is_array()) schema_error("/run/n_values", "expected an array");
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const std::string where = "/run/n_values/" + std::to_string(i);
      if (!ns[i].is_number_integer() || ns[i].get<long long>() < 1)
        schema_error(where, "n must be a positive integer");
      const int n = ns[i].get<int>();
      if (!r.n_values.empty() && n <= r.n_values.back())
        schema_error(where, "n not increasing");
      r.n_values.push_back(n);
    }
  }
  return r;
}

Tolerance parse_tolerance(const json& j) {
  Tolerance t;
  if (!j.is_object()) schema_error("/tolerance", "expected an object");
  if (j.contains("abs_tol")) t.abs_tol = number(j["abs_tol"], "/tolerance/abs_tol");
  if (j.contains("rel_tol")) t.rel_tol = number(j["rel_tol"], "/tolerance/rel_tol");
  if (j.contains("max_iter")) {
    if (!j["max_iter"].is_number_integer())
      schema_error("/tolerance/max_iter", "expected an integer");
    t.max_iter = j["max_iter"].get<int>();
  }
  try {
    t.validate();
  } catch (const Error& err) {
    schema_error("/tolerance", err.what());
  }
  return t;
}

int line_of(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

json utility_json(const UtilityFunction& u) {
  if (const auto* f = std::get_if<LogQuasiLinear>(&u))
    return {{"family", "log_quasi_linear"}, {"params", {{"a", f->a}}}};
  const auto& f = std::get<QuadQuasiLinear>(u);
  return {{"family", "quad_quasi_linear"},
          {"params", {{"alpha", f.alpha}, {"beta", f.beta}}}};
}

}  // namespace

std::string_view to_string(OutputFormat f) {
  return f == OutputFormat::kCsv ? "csv" : "md";
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "md") return OutputFormat::kMarkdown;
  return std::nullopt;
}

std::optional<ReplicaMode> parse_mode(std::string_view name) {
  if (name == "partial") return ReplicaMode::kPartialBuyers;
  if (name == "full") return ReplicaMode::kFull;
  return std::nullopt;
}

std::optional<ReplicaGame> parse_game(std::string_view name) {
  if (name == "nash") return ReplicaGame::kCournotNash;
  if (name == "spne") return ReplicaGame::kSpne;
  return std::nullopt;
}

Economy Scenario::economy() const {
  try {
    return Economy(agents, description);
  } catch (const Error& err) {
    throw Error(ErrorCode::kSchemaError, std::string("/agents: ") + err.what());
  }
}

Scenario parse_scenario(std::string_view text_in) {
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::parse_error& err) {
    throw Error(ErrorCode::kSchemaError,
                "line " + std::to_string(line_of(text_in, err.byte)) + ": " +
                    err.what());
  }
  if (!doc.is_object()) schema_error("/", "expected an object");
  Scenario s;
  if (doc.contains("description")) s.description = text(doc["description"], "/description");
  const json& agents = field(doc, "agents", "");
  if (!agents.is_array() || agents.empty())
    schema_error("/agents", "expected a non-empty array");
  for (std::size_t i = 0; i < agents.size(); ++i)
    s.agents.push_back(parse_agent(agents[i], "/agents/" + std::to_string(i), i));

  if (doc.contains("inverse_demand")) {
    const json& d = doc["inverse_demand"];
    LinearInverseDemand lin{number(field(d, "intercept", "/inverse_demand"),
                                   "/inverse_demand/intercept"),
                            number(field(d, "slope", "/inverse_demand"),
                                   "/inverse_demand/slope")};
    try {
      validate_inverse_demand(lin);
    } catch (const Error& err) {
      schema_error("/inverse_demand", err.what());
    }
    s.inverse_demand = lin;
  }
  if (doc.contains("run")) s.run = parse_run(doc["run"]);
  if (doc.contains("tolerance")) s.tolerance = parse_tolerance(doc["tolerance"]);
  if (doc.contains("exact")) {
    const json& ex = doc["exact"];
    if (!ex.is_object()) schema_error("/exact", "expected an object");
    for (const auto& [label, table] : ex.items()) {
      const std::string where = "/exact/" + label;
      if (!parse_concept(label)) schema_error(where, "unknown concept");
      if (!table.is_object()) schema_error(where, "expected an object");
      for (const auto& [quantity, value] : table.items())
        s.exact[label][quantity] = text(value, where + "/" + quantity);
    }
  }

  bool has_seller = false, has_buyer = false;
  for (const Agent& a : s.agents) {
    has_seller = has_seller || a.role == Role::kSeller;
    has_buyer = has_buyer || a.role == Role::kBuyer;
  }
  if (!has_seller) schema_error("/agents", "at least one seller required");
  if (!has_buyer && !s.inverse_demand)
    schema_error("/agents", "at least one buyer required unless inverse_demand is given");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSchemaError, path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const Error& err) {
    std::string msg = err.what();
    const std::string prefix = std::string(to_string(err.code())) + ": ";
    if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
    throw Error(err.code(), path + ": " + msg);
  }
}

std::string emit_scenario(const Scenario& s) {
  json doc;
  doc["description"] = s.description;
  json agents = json::array();
  for (const Agent& a : s.agents)
    agents.push_back({{"id", a.id},
                      {"role", a.role == Role::kSeller ? "seller" : "buyer"},
                      {"endowment", {{"x", a.endowment.x}, {"y", a.endowment.y}}},
                      {"weight", a.weight},
                      {"utility", utility_json(a.utility)}});
  doc["agents"] = agents;
  if (s.inverse_demand)
    doc["inverse_demand"] = {{"intercept", s.inverse_demand->intercept},
                             {"slope", s.inverse_demand->slope}};
  json run = json::object();
  if (s.run.kind) run["concept"] = to_string(*s.run.kind);
  if (s.run.benchmark) run["benchmark"] = to_string(*s.run.benchmark);
  if (s.run.mode) run["mode"] = to_string(*s.run.mode);
  if (s.run.game) run["game"] = to_string(*s.run.game);
  if (s.run.format) run["format"] = to_string(*s.run.format);
  if (!s.run.n_values.empty()) run["n_values"] = s.run.n_values;
  if (!run.empty()) doc["run"] = run;
  doc["tolerance"] = {{"abs_tol", s.tolerance.abs_tol},
                      {"rel_tol", s.tolerance.rel_tol},
                      {"max_iter", s.tolerance.max_iter}};
  if (!s.exact.empty()) doc["exact"] = s.exact;
  return doc.dump(2) + "\n";
}

}  // namespace bilo
