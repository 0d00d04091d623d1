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

#ifndef BILO_WALRAS_HPP_
#define BILO_WALRAS_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "bilo/economy.hpp"
#include "bilo/equilibrium.hpp"
#include "bilo/numerics.hpp"

namespace bilo {

// Price-taking demand of any agent: maximizes u on the budget line
// px * x + y = px * x0 + y0 with x clamped to [0, wealth / px].
Bundle walrasian_demand(const Agent& agent, double px);

// Role-checked wrappers; throw InvalidArgument on the wrong role or px <= 0.
Bundle buyer_demand(const Agent& agent, Price p);
Bundle seller_demand(const Agent& agent, Price p);

// d x(px) / d px of walrasian_demand, one-sided at clamp boundaries.
double demand_x_slope(const Agent& agent, double px);

double excess_demand_x(const Economy& e, Price p);
double excess_demand_y(const Economy& e, Price p);

struct WalrasResult {
  Price price;
  std::vector<Bundle> allocation;  // economy order
  SolveDiagnostics diagnostics;

  EquilibriumSummary summary(const Economy& e) const;
};

// Default bracket [1e-6, largest buyer choke price].
std::pair<double, double> default_walras_bracket(const Economy& e);

// Throws NoBracket when excess demand keeps its sign on the bracket, and
// VerificationFailed if money does not clear at the returned price.
WalrasResult solve_walras(
    const Economy& e, const Tolerance& tol = {},
    std::optional<std::pair<double, double>> bracket = std::nullopt);

}  // namespace bilo

#endif  // BILO_WALRAS_HPP_
