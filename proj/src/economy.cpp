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

#include "bilo/economy.hpp"

#include <cmath>
#include <utility>

#include "bilo/error.hpp"

namespace bilo {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate_utility(const UtilityFunction& u) {
  std::visit(Overloaded{
                 [](const LogQuasiLinear& f) {
                   if (!positive_finite(f.a))
                     throw Error(ErrorCode::kInvalidArgument,
                                 "log utility weight a must be > 0");
                 },
                 [](const QuadQuasiLinear& f) {
                   if (!positive_finite(f.alpha) || !positive_finite(f.beta))
                     throw Error(ErrorCode::kInvalidArgument,
                                 "quadratic utility needs alpha > 0, beta > 0");
                 },
             },
             u);
}

double utility_value(const UtilityFunction& u, const Bundle& bundle) {
  return std::visit(
      Overloaded{
          [&](const LogQuasiLinear& f) {
            return f.a * std::log1p(bundle.x) + bundle.y;
          },
          [&](const QuadQuasiLinear& f) {
            return f.alpha * bundle.x - 0.5 * f.beta * bundle.x * bundle.x +
                   bundle.y;
          },
      },
      u);
}

Marginals utility_marginals(const UtilityFunction& u, const Bundle& bundle) {
  const double du_dx = std::visit(
      Overloaded{
          [&](const LogQuasiLinear& f) { return f.a / (1.0 + bundle.x); },
          [&](const QuadQuasiLinear& f) { return f.alpha - f.beta * bundle.x; },
      },
      u);
  return {du_dx, 1.0};
}

double utility_curvature_x(const UtilityFunction& u, double x) {
  return std::visit(
      Overloaded{
          [&](const LogQuasiLinear& f) { return -f.a / ((1.0 + x) * (1.0 + x)); },
          [](const QuadQuasiLinear& f) { return -f.beta; },
      },
      u);
}

double choke_price(const UtilityFunction& u) {
  return utility_marginals(u, Bundle{0.0, 0.0}).du_dx;
}

double unconstrained_demand_x(const UtilityFunction& u, double px) {
  return std::visit(
      Overloaded{
          [&](const LogQuasiLinear& f) { return f.a / px - 1.0; },
          [&](const QuadQuasiLinear& f) { return (f.alpha - px) / f.beta; },
      },
      u);
}

bool interchangeable(const Agent& a, const Agent& b) {
  return a.role == b.role && a.endowment == b.endowment &&
         a.weight == b.weight && a.utility == b.utility;
}

void validate_agent(const Agent& agent) {
  validate_utility(agent.utility);
  if (!positive_finite(agent.weight))
    throw Error(ErrorCode::kInvalidArgument,
                "agent " + std::to_string(agent.id) + ": weight must be > 0");
  const Bundle& e = agent.endowment;
  const bool corner = agent.role == Role::kSeller
                          ? positive_finite(e.x) && e.y == 0.0
                          : e.x == 0.0 && positive_finite(e.y);
  if (!corner)
    throw Error(ErrorCode::kInvalidArgument,
                "agent " + std::to_string(agent.id) +
                    ": corner endowment violated");
}

Economy::Economy(std::vector<Agent> agents, std::string description)
    : agents_(std::move(agents)), description_(std::move(description)) {
  position_.reserve(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const Agent& a = agents_[i];
    validate_agent(a);
    if (a.role == Role::kSeller) {
      position_.push_back(sellers_.size());
      sellers_.push_back(i);
      seller_mass_ += a.weight;
    } else {
      position_.push_back(buyers_.size());
      buyers_.push_back(i);
      buyer_mass_ += a.weight;
    }
  }
  if (sellers_.empty() || buyers_.empty())
    throw Error(ErrorCode::kInvalidArgument,
                "economy needs at least one seller and one buyer");
}

Totals weighted_totals(const Economy& e) {
  Totals t;
  for (const Agent& a : e.agents()) {
    t.x += a.weight * a.endowment.x;
    t.y += a.weight * a.endowment.y;
  }
  return t;
}

Economy build_replica(const Economy& base, const ReplicaSpec& spec) {
  if (spec.n < 1)
    throw Error(ErrorCode::kInvalidArgument, "replica count n must be >= 1");
  const auto n = static_cast<std::size_t>(spec.n);
  std::vector<Agent> agents;
  agents.reserve(base.size() * n);
  std::size_t next_id = 0;
  for (const Agent& a : base.agents()) {
    const bool replicate =
        spec.mode == ReplicaMode::kFull || a.role == Role::kBuyer;
    if (!replicate) {
      Agent copy = a;
      copy.id = next_id++;
      agents.push_back(copy);
      continue;
    }
    for (std::size_t c = 0; c < n; ++c) {
      Agent copy = a;
      copy.id = next_id++;
      copy.weight = a.weight / static_cast<double>(n);
      agents.push_back(copy);
    }
  }
  return Economy(std::move(agents), base.description());
}

std::optional<RoleClasses> symmetric_roles(const Economy& e) {
  const auto sellers = e.sellers();
  const auto buyers = e.buyers();
  for (std::size_t i : sellers)
    if (!interchangeable(e.agent(i), e.agent(sellers.front()))) return std::nullopt;
  for (std::size_t i : buyers)
    if (!interchangeable(e.agent(i), e.agent(buyers.front()))) return std::nullopt;
  return RoleClasses{sellers.front(), buyers.front(), sellers.size(),
                     buyers.size()};
}

}  // namespace bilo
