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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bilo/bilateral.hpp"
#include "bilo/cournot.hpp"
#include "bilo/error.hpp"
#include "bilo/sequential.hpp"
#include "oracles.hpp"

using namespace bilo;

namespace {

Economy partial(int n) {
  return build_replica(oracle::base_economy(), {ReplicaMode::kPartialBuyers, n});
}

Eigen::VectorXd offers(double q) { return Eigen::VectorXd::Constant(2, q); }

}  // namespace

TEST_CASE("solve_buyer_subgame") {
  SUBCASE("nothing offered") {
    const BuyerSubgameSolution s = solve_buyer_subgame(partial(3), offers(0.0));
    CHECK(s.bids_out.size() == 6);
    CHECK(s.bids_out.isZero());
    CHECK(s.aggregate_bid == 0.0);
  }
  SUBCASE("closed-form buyer stage at n = 1") {
    const double q = oracle::cn_offer();
    const BuyerSubgameSolution s = solve_buyer_subgame(partial(1), offers(q));
    const double expected = oracle::spne_bid_given_q(q, oracle::k_of(1));
    CHECK(std::abs(s.bids_out[0] - expected) < 1e-8);
    CHECK(std::abs(s.bids_out[0] - oracle::cn_bid()) < 1e-6);
    // Same bids from the simultaneous game's buyer best responses.
    const Economy e = partial(1);
    StrategyProfile p{offers(q), s.bids_out};
    CHECK(std::abs(best_response_buyer(e, p, 2).value - s.bids_out[0]) < 1e-8);
  }
  SUBCASE("non-symmetric path agrees") {
    const Economy e = partial(2);
    const BuyerSubgameSolution a = solve_buyer_subgame(e, offers(1.2), {}, true);
    const BuyerSubgameSolution b = solve_buyer_subgame(e, offers(1.2), {}, false);
    CHECK((a.bids_out - b.bids_out).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(std::abs(a.aggregate_bid_slope - b.aggregate_bid_slope) < 1e-8);
  }
  SUBCASE("aggregate bid slope") {
    for (int n : {1, 3, 10}) {
      const Economy e = partial(n);
      const double k = oracle::k_of(n);
      for (double q : {0.6, 1.2, 1.7}) {
        const BuyerSubgameSolution s = solve_buyer_subgame(e, offers(q), {1e-13, 1e-13, 400});
        const double Q = 2 * q;
        CHECK(std::abs(s.aggregate_bid - Q * k * (3.0 - Q / 2)) < 1e-9);
        CHECK(std::abs(s.aggregate_bid_slope - k * (3.0 - Q)) < 1e-7);
        const double h = 1e-5;
        const double up = solve_buyer_subgame(e, offers(q + h / 2), {1e-13, 1e-13, 400}).aggregate_bid;
        const double dn = solve_buyer_subgame(e, offers(q - h / 2), {1e-13, 1e-13, 400}).aggregate_bid;
        // Both sellers move, so Q changes by 2h.
        CHECK(std::abs(s.aggregate_bid_slope - (up - dn) / (2 * h)) < 1e-5);
      }
    }
  }
  SUBCASE("large replica approaches price taking") {
    const int n = 1000000;
    const double q = oracle::cournot_offer();
    const BuyerSubgameSolution s = solve_buyer_subgame(partial(n), offers(q));
    CHECK(std::abs(s.bids_out[0] - oracle::spne_bid_given_q(q, oracle::k_of(n))) < 1e-8);
    CHECK(std::abs(s.bids_out[0] - oracle::cw_seller().y) < 1e-5);
  }
  SUBCASE("bad offers") {
    CHECK_THROWS_AS(solve_buyer_subgame(partial(1), offers(4.0)), Error);
    CHECK_THROWS_AS(solve_buyer_subgame(partial(1), Eigen::VectorXd::Ones(3)), Error);
  }
}

TEST_CASE("seller_stage_payoff") {
  SUBCASE("seller offering nothing keeps the endowment") {
    Eigen::VectorXd q(2);
    q << 0.0, 1.0;
    CHECK(seller_stage_payoff(partial(1), q, 0) == doctest::Approx(std::log(4.0)));
  }
  SUBCASE("n = 1 at q = 1.5") {
    // b = 1.5 * 0.5 * 1.5 = 1.125 per buyer, px = 2b/Q = 0.75.
    const double v = seller_stage_payoff(partial(1), offers(1.5), 0);
    CHECK(v == doctest::Approx(std::log(2.5) + 0.75 * 1.5).epsilon(1e-10));
    CHECK(std::abs(v - 2.0413) < 1e-4);
  }
  SUBCASE("large replica at the Cournot offer") {
    const double v = seller_stage_payoff(partial(1000000), offers(oracle::cournot_offer()), 0);
    CHECK(std::abs(v - 3.035) < 1e-3);
  }
  SUBCASE("buyer index rejected") {
    CHECK_THROWS_AS(seller_stage_payoff(partial(1), offers(1.0), 2), Error);
  }
}

TEST_CASE("solve_spne") {
  SUBCASE("closed form for n in {1, 10, 100}") {
    for (int n : {1, 10, 100}) {
      CAPTURE(n);
      const Economy e = partial(n);
      const SpneResult r = solve_spne(e);
      const double k = oracle::k_of(n);
      CHECK(std::abs(r.offers[0] - oracle::spne_offer(k)) < 1e-5);
      CHECK(std::abs(r.bids[0] - oracle::spne_bid_given_q(oracle::spne_offer(k), k)) < 1e-5);
      CHECK(r.max_deviation_gain <= 1e-5);
      // Price identity.
      const double Q = aggregate_offer(e, {r.offers, r.bids});
      CHECK(std::abs(r.price.px * Q - aggregate_bid(e, {r.offers, r.bids})) < 1e-12);
      // Inner-outer consistency.
      const BuyerSubgameSolution sub =
          solve_buyer_subgame(e, r.offers, Tolerance{}.tightened(100));
      CHECK(sub.bids_out == r.bids);
    }
  }
  SUBCASE("asymmetric path agrees at n = 1") {
    const SpneResult a = solve_spne(partial(1), {}, true);
    const SpneResult b = solve_spne(partial(1), {}, false);
    CHECK_FALSE(b.symmetric);
    CHECK((a.offers - b.offers).lpNorm<Eigen::Infinity>() < 1e-8);
  }
  SUBCASE("deviation probes with brute force") {
    const Economy e = partial(1);
    const SpneResult r = solve_spne(e);
    const double base = seller_stage_payoff(e, r.offers, 0, Tolerance{}.tightened(100));
    for (double d : {-0.05, -0.01, 0.01, 0.05}) {
      Eigen::VectorXd q = r.offers;
      q[0] += d;
      CHECK(seller_stage_payoff(e, q, 0, Tolerance{}.tightened(100)) <= base + 1e-5);
    }
    // Stage payoff against the rival's offer, maximized by grid scan.
    const double brute = oracle::grid_argmax([&](double x) {
      Eigen::VectorXd q = r.offers;
      q[0] = x;
      return seller_stage_payoff(e, q, 0);
    }, 0.0, 3.0, 300);
    CHECK(std::abs(brute - r.offers[0]) < 1e-5);
  }
  SUBCASE("large-n surrogate reaches the Cournot-Walras outcome") {
    const Economy e = partial(1000000);
    const SpneResult r = solve_spne(e);
    CHECK(std::abs(r.offers[0] - oracle::cournot_offer()) < 1e-5);
    CHECK(std::abs(r.bids[0] - oracle::cw_seller().y) < 1e-5);
    CHECK(std::abs(r.price.px - oracle::cournot_price()) < 1e-5);
    const EquilibriumSummary s = r.summary(e);
    CHECK(std::abs(s.seller.x - oracle::cw_seller().x) < 1e-3);
    CHECK(std::abs(s.seller.y - oracle::cw_seller().y) < 1e-3);
    CHECK(std::abs(s.buyer->x - oracle::cw_buyer().x) < 1e-3);
    CHECK(std::abs(s.buyer->y - oracle::cw_buyer().y) < 1e-3);
    // The printed limit price (sqrt17 - 1)/4 is not B/Q at these strategies.
    CHECK(std::abs(r.price.px - oracle::cn_price()) > 0.5);
  }
  SUBCASE("offers approach the Cournot-Walras offers as n grows") {
    const double cw = solve_cournot_walras(oracle::base_economy()).offers[0];
    double previous = 1e9;
    for (int n : {1, 2, 5, 10, 100, 1000}) {
      CAPTURE(n);
      const double gap = std::abs(solve_spne(partial(n)).offers[0] - cw);
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(std::abs(solve_spne(partial(1000000)).offers[0] - cw) < 1e-3);
  }
  SUBCASE("inner failures surface as InnerSolveFailed") {
    try {
      solve_spne(partial(2), {1e-10, 1e-10, 2});
      FAIL("expected an error");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kInnerSolveFailed);
    }
  }
}
