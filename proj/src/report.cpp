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

#include "bilo/report.hpp"

#include <algorithm>
#include <cstdio>

#include "bilo/bilateral.hpp"
#include "bilo/cournot.hpp"
#include "bilo/error.hpp"
#include "bilo/sequential.hpp"
#include "bilo/walras.hpp"
#include "bilo/welfare.hpp"

namespace bilo {
namespace {

const std::vector<int> kDefaultLimitPoints = {10, 100, 1000};
constexpr double kParetoStep = 0.01;

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const OutputTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(cells[i]);
    }
    out += "\r\n";
  };
  line(t.headers);
  for (const auto& row : t.rows) line(row);
  return out;
}

std::string render_markdown(const OutputTable& t) {
  std::vector<std::size_t> width(t.headers.size(), 3);
  for (std::size_t c = 0; c < t.headers.size(); ++c) {
    width[c] = std::max(width[c], t.headers[c].size());
    for (const auto& row : t.rows) width[c] = std::max(width[c], row[c].size());
  }
  auto numeric = [&](std::size_t c) { return c < t.numeric.size() && t.numeric[c]; };
  auto pad = [&](const std::string& s, std::size_t c) {
    const std::string fill(width[c] - s.size(), ' ');
    return numeric(c) ? fill + s : s + fill;
  };
  std::string out = "### " + t.title + "\n\n|";
  for (std::size_t c = 0; c < t.headers.size(); ++c) out += " " + pad(t.headers[c], c) + " |";
  out += "\n|";
  for (std::size_t c = 0; c < t.headers.size(); ++c)
    out += numeric(c) ? " " + std::string(width[c] - 1, '-') + ": |"
                      : " " + std::string(width[c], '-') + " |";
  out += "\n";
  for (const auto& row : t.rows) {
    out += "|";
    for (std::size_t c = 0; c < row.size(); ++c) out += " " + pad(row[c], c) + " |";
    out += "\n";
  }
  return out;
}

struct Solved {
  EquilibriumSummary summary;
  std::vector<std::pair<std::string, double>> extra;
};

Solved solve_concept(const Scenario& sc, Concept kind, const Tolerance& tol) {
  if (kind == Concept::kCournot) {
    std::vector<Agent> sellers;
    for (const Agent& a : sc.agents)
      if (a.role == Role::kSeller) sellers.push_back(a);
    const InverseDemand demand =
        sc.inverse_demand ? InverseDemand{*sc.inverse_demand}
                          : InverseDemand{BuyerInverseDemand(sc.economy())};
    const CournotResult r = solve_cournot(sellers, demand, tol);
    return {r.summary(), {{"buyer_money_outflow", r.buyer_money_outflow}}};
  }
  const Economy e = sc.economy();
  switch (kind) {
    case Concept::kWalras: return {solve_walras(e, tol).summary(e), {}};
    case Concept::kCournotWalras: return {solve_cournot_walras(e, tol).summary(), {}};
    case Concept::kCournotNash: return {solve_cournot_nash(e, tol).summary(e), {}};
    case Concept::kSpne: return {solve_spne(e, tol).summary(e), {}};
    case Concept::kCournot: break;
  }
  throw Error(ErrorCode::kInvalidArgument, "unhandled concept");
}

OutputTable diagnostics_table(const std::string& title, const SolveDiagnostics& d) {
  return {title,
          {"field", "value"},
          {{"iterations", std::to_string(d.iterations)},
           {"converged", d.converged ? "yes" : "no"},
           {"path", d.path}},
          {false, false}};
}

OutputTable solve_table(const Scenario& sc, Concept kind, const Solved& s) {
  const std::string name(to_string(kind));
  OutputTable t{"solve " + name, {"quantity", "value", "exact"}, {}, {false, true, false}};
  auto exact = [&](const std::string& q) -> std::string {
    auto c = sc.exact.find(name);
    if (c == sc.exact.end()) return "";
    auto it = c->second.find(q);
    return it == c->second.end() ? "" : it->second;
  };
  for (const auto& [q, v] : quantities(s.summary))
    t.rows.push_back({q, format_number(v), exact(q)});
  for (const auto& [q, v] : s.extra) t.rows.push_back({q, format_number(v), exact(q)});
  return t;
}

std::string point_cell(const std::optional<double>& v) {
  return v ? format_number(*v) : "";
}

OutputTable sequence_table(const ReplicaSequence& seq) {
  OutputTable t{"replica " + std::string(to_string(seq.mode)) + " " +
                    std::string(to_string(seq.game)),
                {"n", "k", "offer", "bid", "price", "seller_x", "seller_y",
                 "buyer_x", "buyer_y", "status"},
                {},
                {true, true, true, true, true, true, true, true, true, false}};
  for (const ReplicaPoint& p : seq.points) {
    std::vector<std::string> row{std::to_string(p.n), format_number(p.k)};
    if (p.summary) {
      const EquilibriumSummary& s = *p.summary;
      row.insert(row.end(),
                 {point_cell(s.offer), point_cell(s.bid), format_number(s.price),
                  format_number(s.seller.x), format_number(s.seller.y),
                  s.buyer ? format_number(s.buyer->x) : "",
                  s.buyer ? format_number(s.buyer->y) : "", "ok"});
    } else {
      row.insert(row.end(), 7, "");
      row.push_back("failed: " + p.failure);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

OutputTable limit_table(const std::vector<LimitEstimate>& limits) {
  OutputTable t{"limit fit v(n) = v_inf + c/n", {"quantity", "limit", "rate"}, {},
                {false, true, true}};
  for (const LimitEstimate& l : limits)
    t.rows.push_back({l.quantity, format_number(l.limit), format_number(l.rate)});
  return t;
}

OutputTable gap_table(const GapReport& r, Concept benchmark) {
  OutputTable t{"gap to " + std::string(to_string(benchmark)),
                {"quantity", "limit", "benchmark", "gap", "pass"},
                {},
                {false, true, true, true, false}};
  for (const GapRow& g : r.rows)
    t.rows.push_back({g.quantity, format_number(g.limit), format_number(g.benchmark),
                      format_number(g.gap), g.pass ? "yes" : "no"});
  return t;
}

OutputTable welfare_table(const WelfareReport& report) {
  OutputTable t{"welfare",
                {"concept", "seller_x", "seller_y", "buyer_x", "buyer_y",
                 "seller_utility", "buyer_utility", "mrs_gap", "pareto"},
                {},
                {false, true, true, true, true, true, true, true, false}};
  for (const WelfareRow& r : report.rows) {
    std::string pareto;
    if (r.witness)
      pareto = "dominated by dx=" + format_number(r.witness->dx, 2) +
               " dy=" + format_number(r.witness->dy, 2);
    else if (r.dominated)
      pareto = "undominated";
    t.rows.push_back({r.label, format_number(r.seller.x), format_number(r.seller.y),
                      r.buyer ? format_number(r.buyer->x) : "",
                      r.buyer ? format_number(r.buyer->y) : "",
                      format_number(r.seller_utility, 3),
                      r.buyer_utility ? format_number(*r.buyer_utility, 3) : "",
                      r.mrs_gap ? format_number(*r.mrs_gap) : "", pareto});
  }
  return t;
}

struct Context {
  const Scenario& sc;
  const Command& cmd;
  Tolerance tol;

  std::optional<Concept> kind() const {
    return cmd.kind ? cmd.kind : sc.run.kind;
  }
  std::optional<Concept> benchmark() const {
    return cmd.benchmark ? cmd.benchmark : sc.run.benchmark;
  }
  ReplicaMode mode() const {
    return cmd.mode.value_or(sc.run.mode.value_or(ReplicaMode::kPartialBuyers));
  }
  ReplicaGame game() const {
    return cmd.game.value_or(sc.run.game.value_or(ReplicaGame::kCournotNash));
  }
  const std::vector<int>& n_values() const {
    return cmd.n_values.empty() ? sc.run.n_values : cmd.n_values;
  }
};

Concept require_concept(const std::optional<Concept>& c, const char* what) {
  if (!c) throw Error(ErrorCode::kSchemaError, std::string("no ") + what + " given");
  return *c;
}

// Holds a description of the step in progress for error messages.
struct Step {
  std::string label;
};

void run_solve(const Context& ctx, RunOutput& out, Step& step) {
  const Concept c = require_concept(ctx.kind(), "concept");
  step.label = "concept=" + std::string(to_string(c));
  const Solved s = solve_concept(ctx.sc, c, ctx.tol);
  out.tables.push_back(solve_table(ctx.sc, c, s));
  out.tables.push_back(diagnostics_table("diagnostics", s.summary.diagnostics));
}

ReplicaSequence run_sweep(const Context& ctx, RunOutput& out, Step& step) {
  if (ctx.n_values().empty())
    throw Error(ErrorCode::kSchemaError, "no n values given");
  step.label = "mode=" + std::string(to_string(ctx.mode())) +
               " game=" + std::string(to_string(ctx.game()));
  ReplicaSequence seq =
      sweep(ctx.sc.economy(), ctx.mode(), ctx.game(), ctx.n_values(), ctx.tol);
  out.tables.push_back(sequence_table(seq));
  if (!seq.limits.empty()) out.tables.push_back(limit_table(seq.limits));
  for (const ReplicaPoint& p : seq.points)
    if (!p.summary) {
      out.exit_code = kExitSolver;
      if (out.error.empty())
        out.error = step.label + " n=" + std::to_string(p.n) + ": " + p.failure;
    }
  return seq;
}

GapReport run_gaps(const Context& ctx, const ReplicaSequence& seq, Concept bench,
                   RunOutput& out, Step& step) {
  step.label = "benchmark=" + std::string(to_string(bench));
  const Solved b = solve_concept(ctx.sc, bench, ctx.tol);
  const GapReport gaps = compare_to_benchmark(seq, b.summary);
  out.tables.push_back(gap_table(gaps, bench));
  return gaps;
}

void run_welfare(const Context& ctx, RunOutput& out, Step& step) {
  const Economy e = ctx.sc.economy();
  std::vector<LabeledSummary> results;
  if (ctx.cmd.all_concepts) {
    step.label = "all concepts";
    results = all_concepts(
        e, ctx.n_values().empty() ? kDefaultLimitPoints : ctx.n_values(), ctx.tol);
  } else {
    const Concept c = require_concept(ctx.kind(), "concept");
    step.label = "concept=" + std::string(to_string(c));
    results.push_back({std::string(to_string(c)), solve_concept(ctx.sc, c, ctx.tol).summary});
  }
  step.label = "welfare";
  out.tables.push_back(welfare_table(welfare_report(e, results, kParetoStep)));
}

}  // namespace

std::string format_number(double v, int decimals) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  // A value that rounds to zero prints without a sign.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string render(const std::vector<OutputTable>& tables, OutputFormat format) {
  std::string out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out += format == OutputFormat::kCsv ? "\r\n" : "\n";
    out += format == OutputFormat::kCsv ? render_csv(tables[i])
                                        : render_markdown(tables[i]);
  }
  return out;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchemaError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kShapeMismatch:
      return kExitSchema;
    case ErrorCode::kVerificationFailed:
      return kExitVerification;
    default:
      return kExitSolver;
  }
}

RunOutput run(const Scenario& scenario, const Command& command) {
  RunOutput out;
  out.format = command.format.value_or(scenario.run.format.value_or(OutputFormat::kCsv));
  Tolerance tol = scenario.tolerance;
  if (command.tol) tol.abs_tol = tol.rel_tol = *command.tol;
  const Context ctx{scenario, command, tol};
  Step step{command.name};
  try {
    tol.validate();
    if (command.name == "solve") {
      run_solve(ctx, out, step);
    } else if (command.name == "replicate") {
      const ReplicaSequence seq = run_sweep(ctx, out, step);
      if (const auto bench = ctx.benchmark(); bench && seq.successes() >= 3)
        run_gaps(ctx, seq, *bench, out, step);
    } else if (command.name == "compare") {
      const Concept bench = require_concept(ctx.benchmark(), "benchmark");
      const ReplicaSequence seq = run_sweep(ctx, out, step);
      const GapReport gaps = run_gaps(ctx, seq, bench, out, step);
      if (!gaps.all_pass && out.exit_code == kExitOk) {
        out.exit_code = kExitVerification;
        out.error = "limit differs from " + std::string(to_string(bench)) +
                    " beyond tolerance";
      }
    } else if (command.name == "welfare") {
      run_welfare(ctx, out, step);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown command " + command.name);
    }
  } catch (const Error& err) {
    out.exit_code = exit_code_for(err.code());
    out.error = step.label + ": " + err.what();
  }
  return out;
}

}  // namespace bilo
