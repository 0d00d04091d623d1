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

#include "bilo/bilateral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bilo/error.hpp"

namespace bilo {
namespace {

constexpr double kVerifyThreshold = 1e-5;
constexpr int kVerifyGrid = 200;

Eigen::VectorXd role_weights(const Economy& e, std::span<const std::size_t> idx) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    w[static_cast<Eigen::Index>(k)] = e.agent(idx[k]).weight;
  return w;
}

const Agent& require_role(const Economy& e, std::size_t i, Role role) {
  const Agent& a = e.agent(i);
  if (a.role != role)
    throw Error(ErrorCode::kInvalidArgument,
                "agent " + std::to_string(i) + " has the wrong role");
  return a;
}

double seller_payoff_at(const Agent& s, double q, double q_others, double B) {
  return utility_value(s.utility, seller_bundle_at(s, q, q_others, B));
}

double buyer_payoff_at(const Agent& b, double bid, double b_others, double Q) {
  return utility_value(b.utility, buyer_bundle_at(b, bid, b_others, Q));
}

}  // namespace

void validate_profile(const Economy& e, const StrategyProfile& profile) {
  if (profile.offers.size() != static_cast<Eigen::Index>(e.sellers().size()) ||
      profile.bids.size() != static_cast<Eigen::Index>(e.buyers().size()))
    throw Error(ErrorCode::kInvalidArgument, "profile size mismatch");
  for (std::size_t k = 0; k < e.sellers().size(); ++k) {
    const double q = profile.offers[static_cast<Eigen::Index>(k)];
    if (!(q >= 0.0 && q <= e.agent(e.sellers()[k]).endowment.x))
      throw Error(ErrorCode::kInvalidArgument, "offer outside [0, x0]");
  }
  for (std::size_t k = 0; k < e.buyers().size(); ++k) {
    const double b = profile.bids[static_cast<Eigen::Index>(k)];
    if (!(b >= 0.0 && b <= e.agent(e.buyers()[k]).endowment.y))
      throw Error(ErrorCode::kInvalidArgument, "bid outside [0, y0]");
  }
}

StrategyProfile uniform_profile(const Economy& e, double offer, double bid) {
  return {Eigen::VectorXd::Constant(
              static_cast<Eigen::Index>(e.sellers().size()), offer),
          Eigen::VectorXd::Constant(
              static_cast<Eigen::Index>(e.buyers().size()), bid)};
}

double aggregate_offer(const Economy& e, const StrategyProfile& profile) {
  return role_weights(e, e.sellers()).dot(profile.offers);
}

double aggregate_bid(const Economy& e, const StrategyProfile& profile) {
  return role_weights(e, e.buyers()).dot(profile.bids);
}

double price_rule(const Economy& e, const StrategyProfile& profile) {
  const double Q = aggregate_offer(e, profile);
  return Q > 0.0 ? aggregate_bid(e, profile) / Q : 0.0;
}

std::vector<Bundle> allocate(const Economy& e, const StrategyProfile& profile) {
  validate_profile(e, profile);
  const double Q = aggregate_offer(e, profile);
  const double B = aggregate_bid(e, profile);
  const bool trade = Q > 0.0 && B > 0.0;
  const double px = trade ? B / Q : 0.0;
  std::vector<Bundle> out;
  out.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Agent& a = e.agent(i);
    if (!trade) {
      out.push_back(a.endowment);
      continue;
    }
    const auto k = static_cast<Eigen::Index>(e.role_position(i));
    if (a.role == Role::kSeller) {
      const double q = profile.offers[k];
      out.push_back({a.endowment.x - q, px * q});
    } else {
      const double b = profile.bids[k];
      out.push_back({b / px, a.endowment.y - b});
    }
  }
  return out;
}

double payoff(const Economy& e, const StrategyProfile& profile, std::size_t i) {
  validate_profile(e, profile);
  const Agent& a = e.agent(i);
  const auto k = static_cast<Eigen::Index>(e.role_position(i));
  const double Q = aggregate_offer(e, profile);
  const double B = aggregate_bid(e, profile);
  if (a.role == Role::kSeller) {
    const double q = profile.offers[k];
    return seller_payoff_at(a, q, std::max(0.0, Q - a.weight * q), B);
  }
  const double b = profile.bids[k];
  return buyer_payoff_at(a, b, std::max(0.0, B - a.weight * b), Q);
}

Bundle seller_bundle_at(const Agent& s, double q, double q_others, double B) {
  const double Q = q_others + s.weight * q;
  if (!(Q > 0.0) || !(B > 0.0)) return s.endowment;
  return {s.endowment.x - q, B * q / Q};
}

double seller_marginal_at(const Agent& s, double q, double q_others, double B) {
  if (!(B > 0.0)) return 0.0;
  const Bundle bundle = seller_bundle_at(s, q, q_others, B);
  const Marginals m = utility_marginals(s.utility, bundle);
  const double Q = q_others + s.weight * q;
  // Right limit at Q = 0: revenue B / w does not depend on q.
  const double revenue_slope = Q > 0.0 ? B * q_others / (Q * Q) : 0.0;
  return -m.du_dx + m.du_dy * revenue_slope;
}

Bundle buyer_bundle_at(const Agent& b, double bid, double b_others, double Q) {
  const double B = b_others + b.weight * bid;
  if (!(Q > 0.0) || !(B > 0.0)) return b.endowment;
  return {bid * Q / B, b.endowment.y - bid};
}

double buyer_marginal_at(const Agent& b, double bid, double b_others, double Q) {
  if (!(Q > 0.0)) return 0.0;
  const Bundle bundle = buyer_bundle_at(b, bid, b_others, Q);
  const Marginals m = utility_marginals(b.utility, bundle);
  const double B = b_others + b.weight * bid;
  const double receipt_slope = B > 0.0 ? Q * b_others / (B * B) : 0.0;
  return m.du_dx * receipt_slope - m.du_dy;
}

double seller_best_response_at(const Agent& s, double q_others, double B,
                               const Tolerance& tol) {
  return maximize_concave_1d(
             [&](double q) { return seller_payoff_at(s, q, q_others, B); },
             [&](double q) { return seller_marginal_at(s, q, q_others, B); },
             0.0, s.endowment.x, tol)
      .argmax;
}

double buyer_best_response_at(const Agent& b, double b_others, double Q,
                              const Tolerance& tol) {
  return maximize_concave_1d(
             [&](double bid) { return buyer_payoff_at(b, bid, b_others, Q); },
             [&](double bid) { return buyer_marginal_at(b, bid, b_others, Q); },
             0.0, b.endowment.y, tol)
      .argmax;
}

BestResponse best_response_seller(const Economy& e,
                                  const StrategyProfile& profile,
                                  std::size_t i, const Tolerance& tol) {
  const Agent& s = require_role(e, i, Role::kSeller);
  validate_profile(e, profile);
  const double B = aggregate_bid(e, profile);
  if (!(B > 0.0)) return {0.0, true};
  const double q = profile.offers[static_cast<Eigen::Index>(e.role_position(i))];
  const double others = std::max(0.0, aggregate_offer(e, profile) - s.weight * q);
  return {seller_best_response_at(s, others, B, tol), false};
}

BestResponse best_response_buyer(const Economy& e,
                                 const StrategyProfile& profile,
                                 std::size_t i, const Tolerance& tol) {
  const Agent& b = require_role(e, i, Role::kBuyer);
  validate_profile(e, profile);
  const double Q = aggregate_offer(e, profile);
  if (!(Q > 0.0)) return {0.0, true};
  const double bid = profile.bids[static_cast<Eigen::Index>(e.role_position(i))];
  const double others = std::max(0.0, aggregate_bid(e, profile) - b.weight * bid);
  return {buyer_best_response_at(b, others, Q, tol), false};
}

double nash_deviation_gain(const Economy& e, const StrategyProfile& profile,
                           int grid_points, std::span<const std::size_t> agents) {
  validate_profile(e, profile);
  std::vector<std::size_t> all;
  if (agents.empty()) {
    all.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) all[i] = i;
    agents = all;
  }
  const double Q = aggregate_offer(e, profile);
  const double B = aggregate_bid(e, profile);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i : agents) {
    const Agent& a = e.agent(i);
    const auto k = static_cast<Eigen::Index>(e.role_position(i));
    if (a.role == Role::kSeller) {
      const double q = profile.offers[k];
      const double others = std::max(0.0, Q - a.weight * q);
      const double base = seller_payoff_at(a, q, others, B);
      for (int g = 0; g <= grid_points; ++g) {
        const double dev = a.endowment.x * g / grid_points;
        worst = std::max(worst, seller_payoff_at(a, dev, others, B) - base);
      }
    } else {
      const double b = profile.bids[k];
      const double others = std::max(0.0, B - a.weight * b);
      const double base = buyer_payoff_at(a, b, others, Q);
      for (int g = 0; g <= grid_points; ++g) {
        const double dev = a.endowment.y * g / grid_points;
        worst = std::max(worst, buyer_payoff_at(a, dev, others, Q) - base);
      }
    }
  }
  return worst;
}

NashResult solve_cournot_nash(const Economy& e, const Tolerance& tol,
                              bool symmetric_hint,
                              const FixedPointOptions& opt) {
  tol.validate();
  NashResult out;
  std::vector<std::size_t> checked;
  const std::optional<RoleClasses> classes =
      symmetric_hint ? symmetric_roles(e) : std::nullopt;

  if (classes) {
    const Agent& s = e.agent(classes->seller);
    const Agent& b = e.agent(classes->buyer);
    const auto ns = static_cast<double>(classes->seller_count);
    const auto nb = static_cast<double>(classes->buyer_count);
    auto best_responses = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd next(2);
      next[0] = seller_best_response_at(s, (ns - 1.0) * s.weight * v[0],
                                        nb * b.weight * v[1], tol);
      next[1] = buyer_best_response_at(b, (nb - 1.0) * b.weight * v[1],
                                       ns * s.weight * v[0], tol);
      return next;
    };
    Eigen::VectorXd start(2);
    start << 0.5 * s.endowment.x, 0.5 * b.endowment.y;
    FixedPointResult fp = damped_fixed_point(best_responses, start, tol, opt);
    out.profile = uniform_profile(e, fp.point[0], fp.point[1]);
    out.diagnostics = fp.diag;
    out.symmetric = true;
    checked = {classes->seller, classes->buyer};
  } else {
    const auto m = static_cast<Eigen::Index>(e.sellers().size());
    const auto n = static_cast<Eigen::Index>(e.buyers().size());
    const Eigen::VectorXd ws = role_weights(e, e.sellers());
    const Eigen::VectorXd wb = role_weights(e, e.buyers());
    auto best_responses = [&](const Eigen::VectorXd& v) {
      const double Q = ws.dot(v.head(m));
      const double B = wb.dot(v.tail(n));
      Eigen::VectorXd next(m + n);
      for (Eigen::Index k = 0; k < m; ++k)
        next[k] = seller_best_response_at(
            e.agent(e.sellers()[static_cast<std::size_t>(k)]),
            std::max(0.0, Q - ws[k] * v[k]), B, tol);
      for (Eigen::Index k = 0; k < n; ++k)
        next[m + k] = buyer_best_response_at(
            e.agent(e.buyers()[static_cast<std::size_t>(k)]),
            std::max(0.0, B - wb[k] * v[m + k]), Q, tol);
      return next;
    };
    Eigen::VectorXd start(m + n);
    for (Eigen::Index k = 0; k < m; ++k)
      start[k] = 0.5 * e.agent(e.sellers()[static_cast<std::size_t>(k)]).endowment.x;
    for (Eigen::Index k = 0; k < n; ++k)
      start[m + k] = 0.5 * e.agent(e.buyers()[static_cast<std::size_t>(k)]).endowment.y;
    FixedPointResult fp = damped_fixed_point(best_responses, start, tol, opt);
    out.profile = {fp.point.head(m), fp.point.tail(n)};
    out.diagnostics = fp.diag;
  }

  out.price = Price{price_rule(e, out.profile), 1.0};
  out.allocation = allocate(e, out.profile);
  out.max_deviation_gain =
      nash_deviation_gain(e, out.profile, kVerifyGrid, checked);
  if (out.max_deviation_gain > kVerifyThreshold)
    throw Error(ErrorCode::kVerificationFailed,
                "unilateral deviation improves payoff by " +
                    std::to_string(out.max_deviation_gain));
  return out;
}

EquilibriumSummary NashResult::summary(const Economy& e) const {
  EquilibriumSummary s;
  s.kind = Concept::kCournotNash;
  s.price = price.px;
  s.offer = profile.offers[0];
  s.bid = profile.bids[0];
  s.seller = allocation[e.sellers().front()];
  s.buyer = allocation[e.buyers().front()];
  s.diagnostics = diagnostics;
  return s;
}

}  // namespace bilo
