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

#include "bilo/walras.hpp"

#include <algorithm>
#include <cmath>

#include "bilo/error.hpp"

namespace bilo {
namespace {

void require_price(double px) {
  if (!(px > 0.0) || !std::isfinite(px))
    throw Error(ErrorCode::kInvalidArgument, "price px must be > 0");
}

double wealth(const Agent& a, double px) {
  return px * a.endowment.x + a.endowment.y;
}

}  // namespace

Bundle walrasian_demand(const Agent& agent, double px) {
  require_price(px);
  const double m = wealth(agent, px);
  const double x = std::clamp(unconstrained_demand_x(agent.utility, px), 0.0,
                              m / px);
  return {x, std::max(0.0, m - px * x)};
}

Bundle buyer_demand(const Agent& agent, Price p) {
  if (agent.role != Role::kBuyer)
    throw Error(ErrorCode::kInvalidArgument, "buyer_demand on a seller");
  return walrasian_demand(agent, p.px / p.py);
}

Bundle seller_demand(const Agent& agent, Price p) {
  if (agent.role != Role::kSeller)
    throw Error(ErrorCode::kInvalidArgument, "seller_demand on a buyer");
  return walrasian_demand(agent, p.px / p.py);
}

double demand_x_slope(const Agent& agent, double px) {
  require_price(px);
  const double cap = wealth(agent, px) / px;
  const double x = unconstrained_demand_x(agent.utility, px);
  if (x <= 0.0) return 0.0;
  if (x >= cap) return -agent.endowment.y / (px * px);
  return 1.0 / utility_curvature_x(agent.utility, x);
}

double excess_demand_x(const Economy& e, Price p) {
  double z = 0.0;
  for (const Agent& a : e.agents())
    z += a.weight * (walrasian_demand(a, p.px / p.py).x - a.endowment.x);
  return z;
}

double excess_demand_y(const Economy& e, Price p) {
  double z = 0.0;
  for (const Agent& a : e.agents())
    z += a.weight * (walrasian_demand(a, p.px / p.py).y - a.endowment.y);
  return z;
}

std::pair<double, double> default_walras_bracket(const Economy& e) {
  double hi = 0.0;
  for (std::size_t i : e.buyers())
    hi = std::max(hi, choke_price(e.agent(i).utility));
  return {1e-6, hi};
}

WalrasResult solve_walras(const Economy& e, const Tolerance& tol,
                          std::optional<std::pair<double, double>> bracket) {
  tol.validate();
  const auto [lo, hi] = bracket.value_or(default_walras_bracket(e));
  RootResult r = find_root(
      [&](double px) { return excess_demand_x(e, Price{px, 1.0}); }, lo, hi,
      tol);
  WalrasResult out;
  out.price = Price{r.root, 1.0};
  out.diagnostics = r.diag;
  out.allocation.reserve(e.size());
  for (const Agent& a : e.agents())
    out.allocation.push_back(walrasian_demand(a, r.root));
  const double money = excess_demand_y(e, out.price);
  if (std::abs(money) > 1e-8)
    throw Error(ErrorCode::kVerificationFailed,
                "money market does not clear at the Walras price: " +
                    std::to_string(money));
  return out;
}

EquilibriumSummary WalrasResult::summary(const Economy& e) const {
  const std::size_t s = e.sellers().front();
  const std::size_t b = e.buyers().front();
  EquilibriumSummary out;
  out.kind = Concept::kWalras;
  out.price = price.px;
  out.seller = allocation[s];
  out.buyer = allocation[b];
  out.offer = e.agent(s).endowment.x - allocation[s].x;
  out.bid = price.px * allocation[b].x;
  out.diagnostics = diagnostics;
  return out;
}

}  // namespace bilo
