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

#ifndef BILO_EQUILIBRIUM_HPP_
#define BILO_EQUILIBRIUM_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bilo/economy.hpp"
#include "bilo/numerics.hpp"

namespace bilo {

struct Price {
  double px = 0.0;
  double py = 1.0;
};

enum class Concept { kWalras, kCournot, kCournotWalras, kCournotNash, kSpne };

std::string_view to_string(Concept c);
// Accepts the CLI spellings: walras, cournot, cournot-walras, nash, spne.
std::optional<Concept> parse_concept(std::string_view name);

// Role-representative view of an equilibrium, shared by replica sweeps,
// welfare tables and benchmark comparisons. `offer` and `bid` are the
// representative seller's supply and buyer's money outlay.
struct EquilibriumSummary {
  Concept kind = Concept::kWalras;
  double price = 0.0;
  std::optional<double> offer;
  std::optional<double> bid;
  Bundle seller;
  std::optional<Bundle> buyer;
  SolveDiagnostics diagnostics;
};

// Named scalar view in a fixed order: offer, bid, price, seller_x, seller_y,
// buyer_x, buyer_y. Absent quantities are skipped.
std::vector<std::pair<std::string, double>> quantities(
    const EquilibriumSummary& s);

}  // namespace bilo

#endif  // BILO_EQUILIBRIUM_HPP_
