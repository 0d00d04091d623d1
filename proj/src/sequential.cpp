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

#include "bilo/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "bilo/error.hpp"

namespace bilo {
namespace {

constexpr double kVerifyThreshold = 1e-5;
constexpr double kProbeSteps[] = {-0.05, -0.01, 0.01, 0.05};
constexpr double kInnerTightening = 100.0;

// Representative buyer when all buyers are interchangeable.
struct BuyerView {
  std::optional<std::size_t> rep;
  std::size_t count = 0;
};

BuyerView buyer_view(const Economy& e, bool symmetric_hint) {
  BuyerView v;
  v.count = e.buyers().size();
  if (!symmetric_hint) return v;
  const Agent& first = e.agent(e.buyers().front());
  for (std::size_t i : e.buyers())
    if (!interchangeable(e.agent(i), first)) return v;
  v.rep = e.buyers().front();
  return v;
}

struct Subgame {
  double B = 0.0;
  double slope = 0.0;
  double rep_bid = 0.0;    // symmetric case
  Eigen::VectorXd bids;    // general case
  SolveDiagnostics diag;
};

// Partial derivatives of G = u_x(x) Q (B - w b) / B^2 - 1, with x = b Q / B,
// treating b, B and Q as independent. Returns the contribution of one interior
// buyer to the implicit-function sums.
struct FocTerms {
  double gq_over_gb;
  double gB_over_gb;
};

FocTerms foc_terms(const Agent& a, double b, double B, double Q) {
  const double w = a.weight;
  const double x = b * Q / B;
  const double phi = utility_marginals(a.utility, {x, a.endowment.y - b}).du_dx;
  const double dphi = utility_curvature_x(a.utility, x);
  const double h = Q * (B - w * b) / (B * B);
  const double g_b = dphi * (Q / B) * h - phi * Q * w / (B * B);
  const double g_B = dphi * (-b * Q / (B * B)) * h +
                     phi * Q * (2.0 * w * b - B) / (B * B * B);
  const double g_Q = dphi * (b / B) * h + phi * (B - w * b) / (B * B);
  return {g_Q / g_b, g_B / g_b};
}

bool interior_bid(const Agent& a, double b) {
  return b > 0.0 && b < a.endowment.y;
}

Subgame solve_subgame(const Economy& e, const BuyerView& view, double Q,
                      const Tolerance& tol, const FixedPointOptions& opt) {
  Subgame out;
  if (!(Q > 0.0)) {
    out.diag = {0, 0.0, true, "no offers"};
    if (!view.rep)
      out.bids = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(view.count));
    return out;
  }
  double sum_q = 0.0, sum_B = 0.0;
  if (view.rep) {
    const Agent& b = e.agent(*view.rep);
    const double count = static_cast<double>(view.count);
    auto best_response = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd next(1);
      next[0] = buyer_best_response_at(b, (count - 1.0) * b.weight * v[0], Q, tol);
      return next;
    };
    FixedPointResult fp = damped_fixed_point(
        best_response, Eigen::VectorXd::Constant(1, 0.5 * b.endowment.y), tol,
        opt);
    out.rep_bid = fp.point[0];
    out.diag = fp.diag;
    out.B = count * b.weight * out.rep_bid;
    if (interior_bid(b, out.rep_bid)) {
      const FocTerms t = foc_terms(b, out.rep_bid, out.B, Q);
      sum_q = count * b.weight * t.gq_over_gb;
      sum_B = count * b.weight * t.gB_over_gb;
    }
  } else {
    const auto n = static_cast<Eigen::Index>(view.count);
    Eigen::VectorXd w(n), start(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Agent& a = e.agent(e.buyers()[static_cast<std::size_t>(k)]);
      w[k] = a.weight;
      start[k] = 0.5 * a.endowment.y;
    }
    auto best_responses = [&](const Eigen::VectorXd& v) {
      const double B = w.dot(v);
      Eigen::VectorXd next(n);
      for (Eigen::Index k = 0; k < n; ++k)
        next[k] = buyer_best_response_at(
            e.agent(e.buyers()[static_cast<std::size_t>(k)]),
            std::max(0.0, B - w[k] * v[k]), Q, tol);
      return next;
    };
    FixedPointResult fp = damped_fixed_point(best_responses, start, tol, opt);
    out.bids = fp.point;
    out.diag = fp.diag;
    out.B = w.dot(out.bids);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Agent& a = e.agent(e.buyers()[static_cast<std::size_t>(k)]);
      if (!interior_bid(a, out.bids[k])) continue;
      const FocTerms t = foc_terms(a, out.bids[k], out.B, Q);
      sum_q += w[k] * t.gq_over_gb;
      sum_B += w[k] * t.gB_over_gb;
    }
  }
  out.slope = -sum_q / (1.0 + sum_B);
  return out;
}

Eigen::VectorXd subgame_bids(const Subgame& s, const BuyerView& view) {
  if (view.rep)
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(view.count),
                                     s.rep_bid);
  return s.bids;
}

double seller_weighted_offer(const Economy& e, const Eigen::VectorXd& offers) {
  double Q = 0.0;
  for (std::size_t k = 0; k < e.sellers().size(); ++k)
    Q += e.agent(e.sellers()[k]).weight * offers[static_cast<Eigen::Index>(k)];
  return Q;
}

void validate_offers(const Economy& e, const Eigen::VectorXd& offers) {
  if (offers.size() != static_cast<Eigen::Index>(e.sellers().size()))
    throw Error(ErrorCode::kInvalidArgument, "one offer per seller expected");
  for (std::size_t k = 0; k < e.sellers().size(); ++k) {
    const double q = offers[static_cast<Eigen::Index>(k)];
    if (!(q >= 0.0 && q <= e.agent(e.sellers()[k]).endowment.x))
      throw Error(ErrorCode::kInvalidArgument, "offer outside [0, x0]");
  }
}

// Seller-stage objects for one seller facing the others' weighted offer.
class SellerStage {
 public:
  SellerStage(const Economy& e, const BuyerView& view, const Tolerance& inner,
              const FixedPointOptions& opt)
      : e_(e), view_(view), inner_(inner), opt_(opt) {}

  Subgame subgame(double Q) const {
    try {
      return solve_subgame(e_, view_, Q, inner_, opt_);
    } catch (const Error& err) {
      throw Error(ErrorCode::kInnerSolveFailed,
                  "buyer subgame at Q=" + std::to_string(Q) + ": " + err.what());
    }
  }

  double payoff(const Agent& s, double q, double q_others) const {
    const double Q = q_others + s.weight * q;
    const Subgame sub = subgame(Q);
    return utility_value(s.utility, stage_bundle(s, q, Q, sub.B));
  }

  double marginal(const Agent& s, double q, double q_others) const {
    double Q = q_others + s.weight * q;
    if (!(Q > 0.0)) {
      // Right limit at an empty market.
      q = 1e-9 * s.endowment.x;
      Q = s.weight * q;
    }
    const Subgame sub = subgame(Q);
    const Marginals m =
        utility_marginals(s.utility, stage_bundle(s, q, Q, sub.B));
    const double revenue_slope =
        sub.B / Q + q * s.weight * (sub.slope / Q - sub.B / (Q * Q));
    return -m.du_dx + m.du_dy * revenue_slope;
  }

  double best_response(const Agent& s, double q_others,
                       const Tolerance& tol) const {
    return maximize_concave_1d(
               [&](double q) { return payoff(s, q, q_others); },
               [&](double q) { return marginal(s, q, q_others); }, 0.0,
               s.endowment.x, tol)
        .argmax;
  }

 private:
  static Bundle stage_bundle(const Agent& s, double q, double Q, double B) {
    if (!(Q > 0.0) || !(B > 0.0)) return s.endowment;
    return {s.endowment.x - q, B * q / Q};
  }

  const Economy& e_;
  const BuyerView& view_;
  Tolerance inner_;
  FixedPointOptions opt_;
};

}  // namespace

BuyerSubgameSolution solve_buyer_subgame(const Economy& e,
                                         const Eigen::VectorXd& offers,
                                         const Tolerance& tol,
                                         bool symmetric_hint) {
  tol.validate();
  validate_offers(e, offers);
  const BuyerView view = buyer_view(e, symmetric_hint);
  const Subgame sub =
      solve_subgame(e, view, seller_weighted_offer(e, offers), tol, {});
  BuyerSubgameSolution out;
  out.offers_in = offers;
  out.bids_out = subgame_bids(sub, view);
  out.aggregate_bid = sub.B;
  out.aggregate_bid_slope = sub.slope;
  out.diagnostics = sub.diag;
  return out;
}

double seller_stage_payoff(const Economy& e, const Eigen::VectorXd& offers,
                           std::size_t i, const Tolerance& tol,
                           bool symmetric_hint) {
  const Agent& s = e.agent(i);
  if (s.role != Role::kSeller)
    throw Error(ErrorCode::kInvalidArgument,
                "agent " + std::to_string(i) + " is not a seller");
  const BuyerSubgameSolution sub =
      solve_buyer_subgame(e, offers, tol, symmetric_hint);
  const double Q = seller_weighted_offer(e, offers);
  const double q = offers[static_cast<Eigen::Index>(e.role_position(i))];
  if (!(Q > 0.0) || !(sub.aggregate_bid > 0.0))
    return utility_value(s.utility, s.endowment);
  return utility_value(s.utility,
                       {s.endowment.x - q, sub.aggregate_bid * q / Q});
}

SpneResult solve_spne(const Economy& e, const Tolerance& tol,
                      bool symmetric_hint, const FixedPointOptions& opt) {
  tol.validate();
  const Tolerance inner = tol.tightened(kInnerTightening);
  const BuyerView view = buyer_view(e, symmetric_hint);
  const SellerStage stage(e, view, inner, opt);
  const auto sellers = e.sellers();
  const auto m = static_cast<Eigen::Index>(sellers.size());

  bool seller_symmetric = symmetric_hint && view.rep.has_value();
  for (std::size_t i : sellers)
    if (!interchangeable(e.agent(i), e.agent(sellers.front())))
      seller_symmetric = false;

  SpneResult out;
  std::vector<std::size_t> checked;
  if (seller_symmetric) {
    const Agent& s = e.agent(sellers.front());
    const double others = static_cast<double>(sellers.size()) - 1.0;
    auto best_response = [&](const Eigen::VectorXd& v) {
      Eigen::VectorXd next(1);
      next[0] = stage.best_response(s, others * s.weight * v[0], tol);
      return next;
    };
    FixedPointResult fp = damped_fixed_point(
        best_response, Eigen::VectorXd::Constant(1, 0.5 * s.endowment.x), tol,
        opt);
    out.offers = Eigen::VectorXd::Constant(m, fp.point[0]);
    out.diagnostics = fp.diag;
    out.symmetric = true;
    checked = {sellers.front()};
  } else {
    Eigen::VectorXd w(m), start(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const Agent& s = e.agent(sellers[static_cast<std::size_t>(k)]);
      w[k] = s.weight;
      start[k] = 0.5 * s.endowment.x;
    }
    auto best_responses = [&](const Eigen::VectorXd& v) {
      const double Q = w.dot(v);
      Eigen::VectorXd next(m);
      for (Eigen::Index k = 0; k < m; ++k)
        next[k] = stage.best_response(e.agent(sellers[static_cast<std::size_t>(k)]),
                                      std::max(0.0, Q - w[k] * v[k]), tol);
      return next;
    };
    FixedPointResult fp = damped_fixed_point(best_responses, start, tol, opt);
    out.offers = fp.point;
    out.diagnostics = fp.diag;
    checked.assign(sellers.begin(), sellers.end());
  }
  out.diagnostics.path = "backward induction (" + out.diagnostics.path + ")";

  const double Q = seller_weighted_offer(e, out.offers);
  out.bids = subgame_bids(stage.subgame(Q), view);
  const StrategyProfile profile{out.offers, out.bids};
  out.price = Price{price_rule(e, profile), 1.0};
  out.allocation = allocate(e, profile);

  // Subgame-perfection probe: move one seller's offer and let buyers re-solve.
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i : checked) {
    const Agent& s = e.agent(i);
    const double q = out.offers[static_cast<Eigen::Index>(e.role_position(i))];
    const double q_others = std::max(0.0, Q - s.weight * q);
    const double base = stage.payoff(s, q, q_others);
    for (double delta : kProbeSteps) {
      const double dev = std::clamp(q + delta, 0.0, s.endowment.x);
      worst = std::max(worst, stage.payoff(s, dev, q_others) - base);
    }
  }
  out.max_deviation_gain = worst;
  if (out.max_deviation_gain > kVerifyThreshold)
    throw Error(ErrorCode::kVerificationFailed,
                "first-stage deviation improves payoff by " +
                    std::to_string(out.max_deviation_gain));
  return out;
}

EquilibriumSummary SpneResult::summary(const Economy& e) const {
  EquilibriumSummary s;
  s.kind = Concept::kSpne;
  s.price = price.px;
  s.offer = offers[0];
  s.bid = bids[0];
  s.seller = allocation[e.sellers().front()];
  s.buyer = allocation[e.buyers().front()];
  s.diagnostics = diagnostics;
  return s;
}

}  // namespace bilo
