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

#include "bilo/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "bilo/bilateral.hpp"
#include "bilo/cournot.hpp"
#include "bilo/error.hpp"
#include "bilo/replica.hpp"
#include "bilo/sequential.hpp"
#include "bilo/walras.hpp"

namespace bilo {
namespace {

constexpr double kStrictGain = 1e-9;
constexpr double kFeasibilityTol = 1e-8;

const UtilityFunction& seller_utility(const Economy& e) {
  return e.agent(e.sellers().front()).utility;
}

const UtilityFunction& buyer_utility(const Economy& e) {
  return e.agent(e.buyers().front()).utility;
}

bool nonnegative(const Bundle& b) { return b.x >= 0.0 && b.y >= 0.0; }

}  // namespace

std::vector<WelfareRow> utility_table(
    const Economy& e, const std::vector<LabeledSummary>& results) {
  std::vector<WelfareRow> rows;
  for (const LabeledSummary& r : results) {
    WelfareRow row;
    row.label = r.label;
    row.seller = r.summary.seller;
    row.seller_utility = utility_value(seller_utility(e), row.seller);
    if (r.summary.buyer) {
      row.buyer = *r.summary.buyer;
      row.buyer_utility = utility_value(buyer_utility(e), *row.buyer);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double mrs_gap(const Economy& e, const RoleAllocation& alloc) {
  if (!(alloc.seller.x > 0.0) || !(alloc.buyer.x > 0.0))
    throw Error(ErrorCode::kNotInterior,
                "MRS gap needs both roles to hold some of the good");
  const double s = utility_marginals(seller_utility(e), alloc.seller).du_dx;
  const double b = utility_marginals(buyer_utility(e), alloc.buyer).du_dx;
  return std::abs(s - b);
}

std::optional<ParetoWitness> find_pareto_dominating(const Economy& e,
                                                    const RoleAllocation& alloc,
                                                    double step) {
  if (!(step > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "grid step must be > 0");
  const double ws = e.seller_mass(), wb = e.buyer_mass();
  const Totals t = weighted_totals(e);
  const double gap_x = ws * alloc.seller.x + wb * alloc.buyer.x - t.x;
  const double gap_y = ws * alloc.seller.y + wb * alloc.buyer.y - t.y;
  if (std::abs(gap_x) > kFeasibilityTol * std::max(1.0, t.x) ||
      std::abs(gap_y) > kFeasibilityTol * std::max(1.0, t.y) ||
      !nonnegative(alloc.seller) || !nonnegative(alloc.buyer))
    throw Error(ErrorCode::kInfeasibleStart,
                "allocation does not match endowment totals");

  const double ratio = ws / wb;
  const double us0 = utility_value(seller_utility(e), alloc.seller);
  const double ub0 = utility_value(buyer_utility(e), alloc.buyer);
  // Feasible box for the per-seller transfer.
  const double dx_lo = -alloc.seller.x, dx_hi = alloc.buyer.x / ratio;
  const double dy_lo = -alloc.seller.y, dy_hi = alloc.buyer.y / ratio;
  const long reach = static_cast<long>(std::ceil(
      std::max({-dx_lo, dx_hi, -dy_lo, dy_hi}) / step));

  auto probe = [&](long i, long j) -> std::optional<ParetoWitness> {
    const double dx = static_cast<double>(i) * step;
    const double dy = static_cast<double>(j) * step;
    if (dx < dx_lo || dx > dx_hi || dy < dy_lo || dy > dy_hi) return std::nullopt;
    const RoleAllocation next{
        {alloc.seller.x + dx, alloc.seller.y + dy},
        {alloc.buyer.x - ratio * dx, alloc.buyer.y - ratio * dy}};
    if (!nonnegative(next.seller) || !nonnegative(next.buyer)) return std::nullopt;
    const double gs = utility_value(seller_utility(e), next.seller) - us0;
    const double gb = utility_value(buyer_utility(e), next.buyer) - ub0;
    if (gs >= 0.0 && gb >= 0.0 && std::max(gs, gb) > kStrictGain)
      return ParetoWitness{next, dx, dy, gs, gb};
    return std::nullopt;
  };

  for (long r = 1; r <= reach; ++r) {
    for (long i = -r; i <= r; ++i) {
      if (auto w = probe(i, r)) return w;
      if (auto w = probe(i, -r)) return w;
    }
    for (long j = -r + 1; j <= r - 1; ++j) {
      if (auto w = probe(r, j)) return w;
      if (auto w = probe(-r, j)) return w;
    }
  }
  return std::nullopt;
}

WelfareReport welfare_report(const Economy& e,
                             const std::vector<LabeledSummary>& results,
                             double step) {
  WelfareReport report;
  report.rows = utility_table(e, results);
  for (WelfareRow& row : report.rows) {
    if (!row.buyer) continue;
    const RoleAllocation alloc{row.seller, *row.buyer};
    if (alloc.seller.x > 0.0 && alloc.buyer.x > 0.0)
      row.mrs_gap = mrs_gap(e, alloc);
    row.witness = find_pareto_dominating(e, alloc, step);
    row.dominated = row.witness.has_value();
  }
  return report;
}

std::vector<LabeledSummary> all_concepts(const Economy& base,
                                         const std::vector<int>& n_values,
                                         const Tolerance& tol) {
  auto limit_of = [&](ReplicaGame game) {
    const ReplicaSequence seq =
        sweep(base, ReplicaMode::kPartialBuyers, game, n_values, tol);
    for (const ReplicaPoint& p : seq.points)
      if (!p.summary)
        throw Error(ErrorCode::kInnerSolveFailed,
                    "replica n=" + std::to_string(p.n) + ": " + p.failure);
    return limit_summary(seq);
  };
  std::vector<LabeledSummary> out;
  out.push_back({"cournot-walras", solve_cournot_walras(base, tol).summary()});
  out.push_back({"nash", solve_cournot_nash(base, tol).summary(base)});
  out.push_back({"nash replica limit", limit_of(ReplicaGame::kCournotNash)});
  out.push_back({"spne replica limit", limit_of(ReplicaGame::kSpne)});
  out.push_back({"walras", solve_walras(base, tol).summary(base)});
  return out;
}

}  // namespace bilo
