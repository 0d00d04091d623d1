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

#ifndef BILO_SEQUENTIAL_HPP_
#define BILO_SEQUENTIAL_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "bilo/bilateral.hpp"
#include "bilo/economy.hpp"
#include "bilo/equilibrium.hpp"
#include "bilo/numerics.hpp"

namespace bilo {

// Buyers' Nash equilibrium after observing the offers. Under the proportional
// price rule a buyer's bundle depends on the offers only through Q, so the
// whole subgame is a function of Q.
struct BuyerSubgameSolution {
  Eigen::VectorXd offers_in;
  Eigen::VectorXd bids_out;     // indexed like Economy::buyers()
  double aggregate_bid = 0.0;   // B(Q)
  // dB/dQ from the implicit-function theorem on the interior buyers'
  // first-order conditions; buyers at 0 or y0 are held fixed.
  double aggregate_bid_slope = 0.0;
  SolveDiagnostics diagnostics;
};

// Q = 0 returns all-zero bids. When every buyer is interchangeable and the
// hint is set the fixed point runs on a single bid.
BuyerSubgameSolution solve_buyer_subgame(const Economy& e,
                                         const Eigen::VectorXd& offers,
                                         const Tolerance& tol = {},
                                         bool symmetric_hint = true);

// Utility of seller `i` (agent index) at the allocation induced by the offers
// and the buyers' subgame response.
double seller_stage_payoff(const Economy& e, const Eigen::VectorXd& offers,
                           std::size_t i, const Tolerance& tol = {},
                           bool symmetric_hint = true);

struct SpneResult {
  Eigen::VectorXd offers;
  Eigen::VectorXd bids;   // subgame solution at the offers
  Price price;            // B / Q
  std::vector<Bundle> allocation;
  bool symmetric = false;
  double max_deviation_gain = 0.0;
  SolveDiagnostics diagnostics;

  EquilibriumSummary summary(const Economy& e) const;
};

// Backward induction. Sellers best-respond on the first stage against the
// buyers' subgame equilibrium, which is re-solved at 100x tighter tolerance
// for every candidate offer. The reported bids equal
// solve_buyer_subgame(e, offers, tol.tightened(100), symmetric_hint).
// Each seller is then probed with offer changes of +-0.01 and +-0.05;
// a gain above 1e-5 raises VerificationFailed. Failures of a nested subgame
// solve surface as InnerSolveFailed.
SpneResult solve_spne(const Economy& e, const Tolerance& tol = {},
                      bool symmetric_hint = true,
                      const FixedPointOptions& opt = {});

}  // namespace bilo

#endif  // BILO_SEQUENTIAL_HPP_
