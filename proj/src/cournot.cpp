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

#include "bilo/cournot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bilo/error.hpp"
#include "bilo/walras.hpp"

namespace bilo {
namespace {

constexpr double kVerifyThreshold = 1e-5;
constexpr int kVerifyGrid = 200;

struct PriceAndSlope {
  double price;
  double slope;
};

PriceAndSlope evaluate(const InverseDemand& d, double Q, const Tolerance& tol) {
  if (const auto* lin = std::get_if<LinearInverseDemand>(&d)) {
    const double p = lin->intercept - lin->slope * Q;
    return p > 0.0 ? PriceAndSlope{p, -lin->slope} : PriceAndSlope{0.0, 0.0};
  }
  const auto& derived = std::get<BuyerInverseDemand>(d);
  const double p = derived.saturating_price(Q, tol);
  return {p, p > 0.0 ? derived.slope_at_price(p) : 0.0};
}

void require_seller(const Agent& a) {
  if (a.role != Role::kSeller)
    throw Error(ErrorCode::kInvalidArgument,
                "agent " + std::to_string(a.id) + " is not a seller");
}

}  // namespace

BuyerInverseDemand::BuyerInverseDemand(const Economy& e, double p_min)
    : p_min_(p_min), p_max_(0.0), q_saturation_(0.0) {
  for (std::size_t i : e.buyers()) {
    buyers_.push_back(e.agent(i));
    p_max_ = std::max(p_max_, choke_price(e.agent(i).utility));
  }
  if (buyers_.empty())
    throw Error(ErrorCode::kInvalidArgument, "derived demand needs a buyer");
  if (!(p_min_ > 0.0 && p_min_ < p_max_))
    throw Error(ErrorCode::kInvalidArgument, "bad derived-demand bracket");
  q_saturation_ = aggregate_demand(p_min_);
}

double BuyerInverseDemand::aggregate_demand(double px) const {
  double total = 0.0;
  for (const Agent& b : buyers_) total += b.weight * walrasian_demand(b, px).x;
  return total;
}

double BuyerInverseDemand::price(double Q, const Tolerance& tol) const {
  if (Q < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "aggregate offer must be >= 0");
  if (Q >= q_saturation_)
    throw Error(ErrorCode::kNoBracket,
                "offer " + std::to_string(Q) +
                    " exceeds buyer demand at the minimum price (" +
                    std::to_string(q_saturation_) + ")");
  if (Q == 0.0) return p_max_;
  return find_root([&](double p) { return aggregate_demand(p) - Q; }, p_min_,
                   p_max_, tol.tightened(100.0))
      .root;
}

double BuyerInverseDemand::saturating_price(double Q,
                                            const Tolerance& tol) const {
  return Q >= q_saturation_ ? 0.0 : price(Q, tol);
}

double BuyerInverseDemand::slope_at_price(double px) const {
  double dq_dp = 0.0;
  for (const Agent& b : buyers_) dq_dp += b.weight * demand_x_slope(b, px);
  return dq_dp < 0.0 ? 1.0 / dq_dp : 0.0;
}

void validate_inverse_demand(const InverseDemand& d) {
  if (const auto* lin = std::get_if<LinearInverseDemand>(&d)) {
    if (!(lin->intercept > 0.0) || !(lin->slope > 0.0))
      throw Error(ErrorCode::kInvalidArgument,
                  "linear inverse demand needs intercept > 0 and slope > 0");
  }
}

double inverse_demand_eval(const InverseDemand& d, double Q,
                           const Tolerance& tol) {
  if (Q < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "aggregate offer must be >= 0");
  if (const auto* lin = std::get_if<LinearInverseDemand>(&d))
    return std::max(0.0, lin->intercept - lin->slope * Q);
  return std::get<BuyerInverseDemand>(d).price(Q, tol);
}

Bundle seller_allocation(const Agent& seller, double q, double px) {
  return {seller.endowment.x - q, px * q};
}

double cournot_payoff(const InverseDemand& d, const Agent& seller, double q,
                      double q_others, const Tolerance& tol) {
  const double p = evaluate(d, q_others + seller.weight * q, tol).price;
  return utility_value(seller.utility, seller_allocation(seller, q, p));
}

double cournot_best_response(const InverseDemand& d, const Agent& seller,
                             double q_others, const Tolerance& tol) {
  require_seller(seller);
  if (q_others < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "Q_others must be >= 0");
  auto payoff = [&](double q) {
    return cournot_payoff(d, seller, q, q_others, tol);
  };
  auto marginal = [&](double q) {
    const auto [p, dp] = evaluate(d, q_others + seller.weight * q, tol);
    const Marginals m =
        utility_marginals(seller.utility, seller_allocation(seller, q, p));
    return -m.du_dx + m.du_dy * (p + q * seller.weight * dp);
  };
  return maximize_concave_1d(payoff, marginal, 0.0, seller.endowment.x, tol)
      .argmax;
}

double cournot_deviation_gain(const InverseDemand& d,
                              std::span<const Agent> sellers,
                              const Eigen::VectorXd& offers, int grid_points,
                              const Tolerance& tol) {
  double Q = 0.0;
  for (std::size_t i = 0; i < sellers.size(); ++i)
    Q += sellers[i].weight * offers[static_cast<Eigen::Index>(i)];
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sellers.size(); ++i) {
    const Agent& s = sellers[i];
    const double qi = offers[static_cast<Eigen::Index>(i)];
    const double others = std::max(0.0, Q - s.weight * qi);
    const double base = cournot_payoff(d, s, qi, others, tol);
    for (int g = 0; g <= grid_points; ++g) {
      const double q = s.endowment.x * g / grid_points;
      worst = std::max(worst, cournot_payoff(d, s, q, others, tol) - base);
    }
  }
  return worst;
}

std::vector<Agent> sellers_of(const Economy& e) {
  std::vector<Agent> out;
  out.reserve(e.sellers().size());
  for (std::size_t i : e.sellers()) out.push_back(e.agent(i));
  return out;
}

CournotResult solve_cournot(std::span<const Agent> sellers,
                            const InverseDemand& d, const Tolerance& tol,
                            const FixedPointOptions& opt) {
  tol.validate();
  validate_inverse_demand(d);
  if (sellers.empty())
    throw Error(ErrorCode::kInvalidArgument, "Cournot game needs a seller");
  for (const Agent& s : sellers) {
    validate_agent(s);
    require_seller(s);
  }
  const auto m = static_cast<Eigen::Index>(sellers.size());
  Eigen::VectorXd weights(m), start(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    weights[i] = sellers[static_cast<std::size_t>(i)].weight;
    start[i] = 0.5 * sellers[static_cast<std::size_t>(i)].endowment.x;
  }
  auto best_responses = [&](const Eigen::VectorXd& q) {
    const double Q = weights.dot(q);
    Eigen::VectorXd next(m);
    for (Eigen::Index i = 0; i < m; ++i)
      next[i] = cournot_best_response(d, sellers[static_cast<std::size_t>(i)],
                                      std::max(0.0, Q - weights[i] * q[i]), tol);
    return next;
  };
  FixedPointResult fp = damped_fixed_point(best_responses, start, tol, opt);

  CournotResult out;
  out.offers = fp.point;
  out.diagnostics = fp.diag;
  const double Q = weights.dot(out.offers);
  out.price = Price{evaluate(d, Q, tol).price, 1.0};
  for (Eigen::Index i = 0; i < m; ++i) {
    const Agent& s = sellers[static_cast<std::size_t>(i)];
    out.seller_bundles.push_back(
        seller_allocation(s, out.offers[i], out.price.px));
    out.seller_payoffs.push_back(
        utility_value(s.utility, out.seller_bundles.back()));
  }
  out.buyer_money_outflow = out.price.px * Q;
  out.max_deviation_gain =
      cournot_deviation_gain(d, sellers, out.offers, kVerifyGrid, tol);
  if (out.max_deviation_gain > kVerifyThreshold)
    throw Error(ErrorCode::kVerificationFailed,
                "Cournot deviation improves payoff by " +
                    std::to_string(out.max_deviation_gain));
  return out;
}

CournotResult solve_cournot_walras(const Economy& e, const Tolerance& tol,
                                   const FixedPointOptions& opt) {
  const std::vector<Agent> sellers = sellers_of(e);
  CournotResult out =
      solve_cournot(sellers, InverseDemand{BuyerInverseDemand(e)}, tol, opt);
  for (std::size_t i : e.buyers())
    out.buyer_bundles.push_back(walrasian_demand(e.agent(i), out.price.px));
  return out;
}

EquilibriumSummary CournotResult::summary() const {
  EquilibriumSummary s;
  s.kind = buyer_bundles.empty() ? Concept::kCournot : Concept::kCournotWalras;
  s.price = price.px;
  s.offer = offers[0];
  s.seller = seller_bundles.front();
  if (!buyer_bundles.empty()) {
    s.buyer = buyer_bundles.front();
    s.bid = price.px * buyer_bundles.front().x;
  }
  s.diagnostics = diagnostics;
  return s;
}

}  // namespace bilo
