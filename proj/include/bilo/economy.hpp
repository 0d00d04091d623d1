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

#ifndef BILO_ECONOMY_HPP_
#define BILO_ECONOMY_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bilo {

// A point of the non-negative orthant: x units of the consumption good and
// y units of money. Money is the numeraire throughout (p_y = 1).
struct Bundle {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

// u(x, y) = a * ln(1 + x) + y
struct LogQuasiLinear {
  double a = 1.0;

  friend bool operator==(const LogQuasiLinear&, const LogQuasiLinear&) = default;
};

// u(x, y) = alpha * x - (beta / 2) * x^2 + y
struct QuadQuasiLinear {
  double alpha = 1.0;
  double beta = 1.0;

  friend bool operator==(const QuadQuasiLinear&, const QuadQuasiLinear&) = default;
};

using UtilityFunction = std::variant<LogQuasiLinear, QuadQuasiLinear>;

struct Marginals {
  double du_dx = 0.0;
  double du_dy = 1.0;
};

// Throws InvalidArgument unless every parameter is finite and > 0.
void validate_utility(const UtilityFunction& u);

double utility_value(const UtilityFunction& u, const Bundle& bundle);
Marginals utility_marginals(const UtilityFunction& u, const Bundle& bundle);

// d2u/dx2; both families are separable so this depends on x only.
double utility_curvature_x(const UtilityFunction& u, double x);

// Marginal utility of the good at x = 0: no price-taker demands the good at
// or above this price.
double choke_price(const UtilityFunction& u);

// Solution of du/dx(x) = px ignoring box constraints.
double unconstrained_demand_x(const UtilityFunction& u, double px);

enum class Role { kSeller, kBuyer };

struct Agent {
  std::size_t id = 0;
  Role role = Role::kSeller;
  Bundle endowment;
  double weight = 1.0;
  UtilityFunction utility = LogQuasiLinear{};

  friend bool operator==(const Agent&, const Agent&) = default;
};

// Same role, endowment, weight and preferences; ids may differ.
bool interchangeable(const Agent& a, const Agent& b);

// Two-commodity exchange economy with corner endowments. Immutable once
// constructed; the constructor enforces every invariant.
class Economy {
 public:
  explicit Economy(std::vector<Agent> agents, std::string description = {});

  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(std::size_t i) const { return agents_.at(i); }
  std::size_t size() const { return agents_.size(); }
  const std::string& description() const { return description_; }

  // Agent indices by role, in economy order.
  std::span<const std::size_t> sellers() const { return sellers_; }
  std::span<const std::size_t> buyers() const { return buyers_; }
  // Position of agent i within sellers() or buyers().
  std::size_t role_position(std::size_t i) const { return position_.at(i); }

  // Sum of weights per role.
  double seller_mass() const { return seller_mass_; }
  double buyer_mass() const { return buyer_mass_; }

 private:
  std::vector<Agent> agents_;
  std::string description_;
  std::vector<std::size_t> sellers_;
  std::vector<std::size_t> buyers_;
  std::vector<std::size_t> position_;
  double seller_mass_ = 0.0;
  double buyer_mass_ = 0.0;
};

// Throws InvalidArgument when the agent violates its role's corner
// endowment, has a non-positive weight, or carries invalid utility params.
void validate_agent(const Agent& agent);

struct Totals {
  double x = 0.0;
  double y = 0.0;
};

Totals weighted_totals(const Economy& e);

enum class ReplicaMode { kPartialBuyers, kFull };

struct ReplicaSpec {
  ReplicaMode mode = ReplicaMode::kPartialBuyers;
  int n = 1;
};

// Each replicated agent is copied n times with its weight divided by n, so
// weighted endowment totals never change. PartialBuyers leaves sellers alone.
Economy build_replica(const Economy& base, const ReplicaSpec& spec);

// When all sellers are interchangeable and all buyers are interchangeable the
// economy has one class per role.
struct RoleClasses {
  std::size_t seller;  // representative agent index
  std::size_t buyer;
  std::size_t seller_count;
  std::size_t buyer_count;
};

std::optional<RoleClasses> symmetric_roles(const Economy& e);

}  // namespace bilo

#endif  // BILO_ECONOMY_HPP_
