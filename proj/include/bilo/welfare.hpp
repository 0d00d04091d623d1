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

#ifndef BILO_WELFARE_HPP_
#define BILO_WELFARE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "bilo/economy.hpp"
#include "bilo/equilibrium.hpp"
#include "bilo/numerics.hpp"

namespace bilo {

// Bundles of the representative seller and buyer. Agents within a role are
// assumed identical, as in every symmetric equilibrium.
struct RoleAllocation {
  Bundle seller;
  Bundle buyer;
};

struct LabeledSummary {
  std::string label;
  EquilibriumSummary summary;
};

struct ParetoWitness {
  RoleAllocation allocation;
  double dx = 0.0;  // per-seller transfer of the good (buyers give Ws/Wb dx)
  double dy = 0.0;  // per-seller transfer of money
  double seller_gain = 0.0;
  double buyer_gain = 0.0;
};

struct WelfareRow {
  std::string label;
  Bundle seller;
  std::optional<Bundle> buyer;
  double seller_utility = 0.0;
  std::optional<double> buyer_utility;
  std::optional<double> mrs_gap;        // set for interior two-sided rows
  std::optional<bool> dominated;        // set once a Pareto search ran
  std::optional<ParetoWitness> witness;
};

struct WelfareReport {
  std::vector<WelfareRow> rows;
};

// Utilities are recomputed from the bundles with the economy's first seller
// and first buyer preferences.
std::vector<WelfareRow> utility_table(const Economy& e,
                                      const std::vector<LabeledSummary>& results);

// |du/dx(seller) - du/dx(buyer)|. Money enters linearly, so this is the gap in
// marginal rates of substitution. Throws NotInterior if either x <= 0.
double mrs_gap(const Economy& e, const RoleAllocation& alloc);

// Role-symmetric transfers on a grid of the given step, searched outward in
// square rings around the starting allocation. Each seller receives (dx, dy)
// and each buyer gives up Ws/Wb times that, so weighted totals are conserved.
// Returns the first transfer that leaves both roles weakly better off and one
// better off by more than 1e-9, or nullopt when none exists on the grid.
// Throws InfeasibleStart if the allocation does not match endowment totals.
std::optional<ParetoWitness> find_pareto_dominating(const Economy& e,
                                                    const RoleAllocation& alloc,
                                                    double step);

// utility_table plus MRS gap and Pareto search for every two-sided row.
WelfareReport welfare_report(const Economy& e,
                             const std::vector<LabeledSummary>& results,
                             double step = 0.01);

// The five concepts on one base economy: Cournot-Walras, Cournot-Nash,
// the partial-replica Cournot-Nash and SPNE limits, and Walras. Limits are
// fitted over n_values (at least three).
std::vector<LabeledSummary> all_concepts(const Economy& base,
                                         const std::vector<int>& n_values,
                                         const Tolerance& tol = {});

}  // namespace bilo

#endif  // BILO_WELFARE_HPP_
