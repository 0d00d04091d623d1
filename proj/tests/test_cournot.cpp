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

#include "bilo/cournot.hpp"
#include "bilo/error.hpp"
#include "oracles.hpp"

using namespace bilo;

namespace {

const LinearInverseDemand kLinear{3.0, 0.5};

}  // namespace

TEST_CASE("inverse_demand_eval") {
  const Economy e = oracle::base_economy();
  const InverseDemand derived{BuyerInverseDemand(e)};
  CHECK(std::abs(inverse_demand_eval(derived, 2.0) - 2.0) < 1e-8);
  CHECK(inverse_demand_eval(InverseDemand{kLinear}, 0.0) == 3.0);
  CHECK(inverse_demand_eval(InverseDemand{kLinear}, 10.0) == 0.0);
  CHECK(std::abs(inverse_demand_eval(derived, (18.0 - 2.0 * oracle::kSqrt15) / 3.0) -
                 oracle::cournot_price()) < 1e-8);
  // Derived demand equals the linear one wherever buyers are interior.
  for (double Q : {0.5, 1.0, 3.0, 5.0})
    CHECK(std::abs(inverse_demand_eval(derived, Q) - (3.0 - 0.5 * Q)) < 1e-8);
  try {
    inverse_demand_eval(derived, 20.0);
    FAIL("expected NoBracket");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNoBracket);
  }
  CHECK_THROWS_AS(inverse_demand_eval(derived, -1.0), Error);
  CHECK_THROWS_AS(validate_inverse_demand(InverseDemand{LinearInverseDemand{3.0, 0.0}}), Error);
}

TEST_CASE("derived demand of one rich buyer differs from two buyers") {
  const Agent s{0, Role::kSeller, {3.0, 0.0}, 1.0, LogQuasiLinear{1.0}};
  const Agent rich{1, Role::kBuyer, {0.0, 10.0}, 1.0, QuadQuasiLinear{3.0, 1.0}};
  const BuyerInverseDemand one(Economy({s, rich}));
  const BuyerInverseDemand two(oracle::base_economy());
  // Horizontal sums of x(p) = 3 - p: one buyer p = 3 - Q, two buyers p = 3 - Q/2.
  CHECK(std::abs(one.price(2.0) - 1.0) < 1e-8);
  CHECK(std::abs(two.price(2.0) - 2.0) < 1e-8);
  CHECK(one.price(2.0) != doctest::Approx(two.price(2.0)));
}

TEST_CASE("seller_allocation") {
  const Agent s = oracle::base_sellers()[0];
  CHECK(seller_allocation(s, 0.0, 1.7) == Bundle{3.0, 0.0});
  const Bundle b = seller_allocation(s, oracle::cournot_offer(), oracle::cournot_price());
  CHECK(std::abs(b.x - oracle::cw_seller().x) < 1e-12);
  CHECK(std::abs(b.y - oracle::cw_seller().y) < 1e-12);
  CHECK(seller_allocation(s, 3.0, 1.0) == Bundle{0.0, 3.0});
}

TEST_CASE("cournot_best_response") {
  const Agent s = oracle::base_sellers()[0];
  const InverseDemand d{kLinear};
  CHECK(std::abs(cournot_best_response(d, s, oracle::cournot_offer()) - oracle::cournot_offer()) < 1e-6);
  CHECK(cournot_best_response(d, s, 6.0) == 0.0);
  const double monopoly = cournot_best_response(d, s, 0.0);
  const double root = oracle::bisect([](double q) { return -1.0 / (4.0 - q) + 3.0 - q; }, 0.0, 3.0);
  CHECK(std::abs(monopoly - root) < 1e-8);
  CHECK(std::abs(monopoly - oracle::monopoly_offer()) < 1e-8);
  const double brute = oracle::grid_argmax(
      [&](double q) { return cournot_payoff(d, s, q, 0.0); }, 0.0, 3.0);
  CHECK(std::abs(monopoly - brute) < 1e-6);
  CHECK_THROWS_AS(cournot_best_response(d, s, -1.0), Error);
}

TEST_CASE("solve_cournot") {
  const std::vector<Agent> sellers = oracle::base_sellers();
  SUBCASE("two sellers, linear demand") {
    const CournotResult r = solve_cournot(sellers, InverseDemand{kLinear});
    CHECK(std::abs(r.offers[0] - oracle::cournot_offer()) < 1e-6);
    CHECK(std::abs(r.offers[1] - oracle::cournot_offer()) < 1e-6);
    CHECK(std::abs(r.price.px - oracle::cournot_price()) < 1e-6);
    CHECK(r.buyer_bundles.empty());
    CHECK(r.max_deviation_gain < 1e-6);
    CHECK(r.seller_payoffs[0] == doctest::Approx(oracle::log_u(oracle::cw_seller().x, oracle::cw_seller().y)));
    // Money comes in from outside: sellers end with p Q, no agent paid it.
    const double Q = r.offers.sum();
    CHECK(r.buyer_money_outflow == doctest::Approx(r.price.px * Q));
    CHECK(r.seller_bundles[0].y + r.seller_bundles[1].y > 4.0);
  }
  SUBCASE("single seller is a monopolist") {
    const CournotResult r = solve_cournot(std::vector<Agent>{sellers[0]}, InverseDemand{kLinear});
    CHECK(std::abs(r.offers[0] - oracle::monopoly_offer()) < 1e-6);
  }
  SUBCASE("deviation grid") {
    const CournotResult r = solve_cournot(sellers, InverseDemand{kLinear});
    CHECK(cournot_deviation_gain(InverseDemand{kLinear}, sellers, r.offers, 200) < 1e-6);
  }
  SUBCASE("invalid inputs") {
    std::vector<Agent> bad = sellers;
    bad[0].utility = LogQuasiLinear{0.0};
    CHECK_THROWS_AS(solve_cournot(bad, InverseDemand{kLinear}), Error);
    CHECK_THROWS_AS(solve_cournot(std::vector<Agent>{}, InverseDemand{kLinear}), Error);
  }
}

TEST_CASE("solve_cournot_walras") {
  const Economy e = oracle::base_economy();
  const CournotResult cw = solve_cournot_walras(e);
  const CournotResult c = solve_cournot(oracle::base_sellers(), InverseDemand{kLinear});
  CHECK((cw.offers - c.offers).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(std::abs(cw.price.px - oracle::cournot_price()) < 1e-6);
  REQUIRE(cw.buyer_bundles.size() == 2);
  CHECK(std::abs(cw.seller_bundles[0].x - oracle::cw_seller().x) < 1e-6);
  CHECK(std::abs(cw.seller_bundles[0].y - oracle::cw_seller().y) < 1e-6);
  CHECK(std::abs(cw.buyer_bundles[0].x - oracle::cw_buyer().x) < 1e-6);
  CHECK(std::abs(cw.buyer_bundles[0].y - oracle::cw_buyer().y) < 1e-6);
  CHECK(std::abs(oracle::log_u(cw.seller_bundles[0].x, cw.seller_bundles[0].y) - 3.035) < 1e-3);
  CHECK(std::abs(oracle::quad_u(cw.buyer_bundles[0].x, cw.buyer_bundles[0].y) - 6.460) < 1e-3);
  double x = 0, y = 0;
  for (const Bundle& b : cw.seller_bundles) x += b.x, y += b.y;
  for (const Bundle& b : cw.buyer_bundles) x += b.x, y += b.y;
  CHECK(std::abs(x - 6.0) < 1e-8);
  CHECK(std::abs(y - 10.0) < 1e-8);
  const EquilibriumSummary s = cw.summary();
  CHECK(s.kind == Concept::kCournotWalras);
  CHECK(*s.bid == doctest::Approx(cw.price.px * cw.buyer_bundles[0].x));
}
