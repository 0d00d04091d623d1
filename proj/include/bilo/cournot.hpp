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

#ifndef BILO_COURNOT_HPP_
#define BILO_COURNOT_HPP_

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "bilo/economy.hpp"
#include "bilo/equilibrium.hpp"
#include "bilo/numerics.hpp"

namespace bilo {

// px(Q) = max(0, intercept - slope * Q)
struct LinearInverseDemand {
  double intercept = 1.0;
  double slope = 1.0;

  friend bool operator==(const LinearInverseDemand&,
                         const LinearInverseDemand&) = default;
};

// Inverse of the buyers' aggregate Walrasian demand: px(Q) solves
// sum_i w_i x_i(px) = Q. Holds its own copy of the buyers and the monotone
// bracket [p_min, largest choke price] computed once at construction.
class BuyerInverseDemand {
 public:
  explicit BuyerInverseDemand(const Economy& e, double p_min = 1e-6);

  // Throws NoBracket when Q is at or beyond what buyers take at p_min.
  double price(double Q, const Tolerance& tol = {}) const;
  // Same as price() but returns 0 past saturation.
  double saturating_price(double Q, const Tolerance& tol = {}) const;
  // d px / d Q at the given price (0 once saturated).
  double slope_at_price(double px) const;

  double aggregate_demand(double px) const;
  double saturation_quantity() const { return q_saturation_; }
  std::pair<double, double> bracket() const { return {p_min_, p_max_}; }

 private:
  std::vector<Agent> buyers_;
  double p_min_;
  double p_max_;
  double q_saturation_;
};

using InverseDemand = std::variant<LinearInverseDemand, BuyerInverseDemand>;

void validate_inverse_demand(const InverseDemand& d);

double inverse_demand_eval(const InverseDemand& d, double Q,
                           const Tolerance& tol = {});

// (x0 - q, px * q)
Bundle seller_allocation(const Agent& seller, double q, double px);

// Seller utility when offering q against the others' weighted offer Q_others.
double cournot_payoff(const InverseDemand& d, const Agent& seller, double q,
                      double q_others, const Tolerance& tol = {});

double cournot_best_response(const InverseDemand& d, const Agent& seller,
                             double q_others, const Tolerance& tol = {});

struct CournotResult {
  Eigen::VectorXd offers;              // one per seller
  Price price;
  std::vector<Bundle> seller_bundles;
  std::vector<Bundle> buyer_bundles;   // empty in the partial-equilibrium game
  std::vector<double> seller_payoffs;
  // Money paid in by the demand side, px * Q. Under the partial-equilibrium
  // game this money enters from outside the model.
  double buyer_money_outflow = 0.0;
  double max_deviation_gain = 0.0;
  SolveDiagnostics diagnostics;

  EquilibriumSummary summary() const;
};

// Largest unilateral payoff improvement found on a uniform grid of
// `grid_points` offers per seller.
double cournot_deviation_gain(const InverseDemand& d,
                              std::span<const Agent> sellers,
                              const Eigen::VectorXd& offers, int grid_points,
                              const Tolerance& tol = {});

CournotResult solve_cournot(std::span<const Agent> sellers,
                            const InverseDemand& d, const Tolerance& tol = {},
                            const FixedPointOptions& opt = {});

// Sellers play against the buyers' derived inverse demand; buyers receive
// their Walrasian bundles at the resulting price.
CournotResult solve_cournot_walras(const Economy& e, const Tolerance& tol = {},
                                   const FixedPointOptions& opt = {});

std::vector<Agent> sellers_of(const Economy& e);

}  // namespace bilo

#endif  // BILO_COURNOT_HPP_
