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

#ifndef BILO_BILATERAL_HPP_
#define BILO_BILATERAL_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bilo/economy.hpp"
#include "bilo/equilibrium.hpp"
#include "bilo/numerics.hpp"

namespace bilo {

// Offers are indexed like Economy::sellers(), bids like Economy::buyers().
// Weights come from the economy: Q = sum w_i q_i and B = sum w_i b_i.
struct StrategyProfile {
  Eigen::VectorXd offers;
  Eigen::VectorXd bids;
};

// Throws InvalidArgument on size mismatch or a strategy outside its box.
void validate_profile(const Economy& e, const StrategyProfile& profile);

StrategyProfile uniform_profile(const Economy& e, double offer, double bid);

double aggregate_offer(const Economy& e, const StrategyProfile& profile);
double aggregate_bid(const Economy& e, const StrategyProfile& profile);

// B / Q, or 0 when Q = 0.
double price_rule(const Economy& e, const StrategyProfile& profile);

// Sellers get (x0 - q, px q), buyers (b / px, y0 - b). Trade needs both
// sides active: when Q = 0 or B = 0 every agent keeps its endowment, so
// unmatched bids or offers are returned.
std::vector<Bundle> allocate(const Economy& e, const StrategyProfile& profile);

double payoff(const Economy& e, const StrategyProfile& profile, std::size_t i);

// Payoff kernels for one agent facing fixed aggregates of everybody else.
// `q_others` and `b_others` are weighted sums that exclude the agent.
Bundle seller_bundle_at(const Agent& s, double q, double q_others, double B);
double seller_marginal_at(const Agent& s, double q, double q_others, double B);
Bundle buyer_bundle_at(const Agent& b, double bid, double b_others, double Q);
double buyer_marginal_at(const Agent& b, double bid, double b_others, double Q);

// Kernel best responses; the opposite aggregate must be positive.
double seller_best_response_at(const Agent& s, double q_others, double B,
                               const Tolerance& tol);
double buyer_best_response_at(const Agent& b, double b_others, double Q,
                              const Tolerance& tol);

struct BestResponse {
  double value = 0.0;
  // Set when the other side is inactive (B = 0 for a seller, Q = 0 for a
  // buyer); value is then 0.
  bool degenerate = false;
};

// `i` is an agent index of the matching role.
BestResponse best_response_seller(const Economy& e,
                                  const StrategyProfile& profile,
                                  std::size_t i, const Tolerance& tol = {});
BestResponse best_response_buyer(const Economy& e,
                                 const StrategyProfile& profile,
                                 std::size_t i, const Tolerance& tol = {});

// Largest payoff gain from a unilateral deviation on a uniform grid of
// grid_points + 1 strategies, over the listed agents (all agents if empty).
double nash_deviation_gain(const Economy& e, const StrategyProfile& profile,
                           int grid_points,
                           std::span<const std::size_t> agents = {});

struct NashResult {
  StrategyProfile profile;
  Price price;
  std::vector<Bundle> allocation;
  bool symmetric = false;
  double max_deviation_gain = 0.0;
  SolveDiagnostics diagnostics;

  EquilibriumSummary summary(const Economy& e) const;
};

// Damped joint best-response iteration. With symmetric_hint and
// interchangeable agents within each role the iteration runs on one offer
// and one bid. The result is always checked with a 200-point deviation grid;
// a gain above 1e-5 raises VerificationFailed.
NashResult solve_cournot_nash(const Economy& e, const Tolerance& tol = {},
                              bool symmetric_hint = true,
                              const FixedPointOptions& opt = {});

}  // namespace bilo

#endif  // BILO_BILATERAL_HPP_
