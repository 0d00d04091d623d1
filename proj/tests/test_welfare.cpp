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
#include "bilo/walras.hpp"
#include "bilo/welfare.hpp"
#include "oracles.hpp"

using namespace bilo;

namespace {

// Independent re-check of a witness: both utilities weakly up, one strictly,
// totals conserved.
void check_witness(const RoleAllocation& start, const ParetoWitness& w) {
  const double ds = oracle::log_u(w.allocation.seller.x, w.allocation.seller.y) -
                    oracle::log_u(start.seller.x, start.seller.y);
  const double db = oracle::quad_u(w.allocation.buyer.x, w.allocation.buyer.y) -
                    oracle::quad_u(start.buyer.x, start.buyer.y);
  CHECK(ds >= 0.0);
  CHECK(db >= 0.0);
  CHECK(std::max(ds, db) > 1e-9);
  // Two sellers and two buyers of unit weight.
  CHECK(std::abs(2 * (w.allocation.seller.x + w.allocation.buyer.x) -
                 2 * (start.seller.x + start.buyer.x)) <= 1e-12);
  CHECK(std::abs(2 * (w.allocation.seller.y + w.allocation.buyer.y) -
                 2 * (start.seller.y + start.buyer.y)) <= 1e-12);
}

}  // namespace

TEST_CASE("utility_table") {
  const Economy e = oracle::base_economy();
  CHECK(utility_table(e, {}).empty());
  EquilibriumSummary w = solve_walras(e).summary(e);
  const auto rows = utility_table(e, {{"walras", w}});
  REQUIRE(rows.size() == 1);
  const double direct = std::log(1.0 + (oracle::kSqrt5 - 1.0) / 2.0) + 2 * oracle::kSqrt5 - 3.0;
  CHECK(std::abs(rows[0].seller_utility - direct) < 1e-8);
  CHECK(std::abs(rows[0].seller_utility - 1.953) < 0.005);
  CHECK(std::abs(*rows[0].buyer_utility - 7.837) < 0.005);
  // Utilities come from bundles: tampering with a bundle changes them.
  w.seller.y += 1.0;
  CHECK(utility_table(e, {{"x", w}})[0].seller_utility == doctest::Approx(direct + 1.0));
}

TEST_CASE("five-concept table") {
  const Economy e = oracle::base_economy();
  const auto results = all_concepts(e, {10, 100, 1000});
  const auto rows = utility_table(e, results);
  const double printed[5][2] = {
      {3.035, 6.460}, {2.064, 7.158}, {2.693, 7.000}, {3.035, 6.460}, {1.950, 7.837}};
  REQUIRE(rows.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CAPTURE(rows[i].label);
    CHECK(std::abs(rows[i].seller_utility - printed[i][0]) < 0.005);
    CHECK(std::abs(*rows[i].buyer_utility - printed[i][1]) < 0.005);
  }
}

TEST_CASE("mrs_gap") {
  const Economy e = oracle::base_economy();
  CHECK(mrs_gap(e, {oracle::walras_seller(), oracle::walras_buyer()}) < 1e-8);
  const double cn = 1.0 / (1.0 + oracle::cn_seller().x) - (3.0 - oracle::cn_buyer().x);
  CHECK(mrs_gap(e, {oracle::cn_seller(), oracle::cn_buyer()}) == doctest::Approx(std::abs(cn)));
  CHECK(std::abs(mrs_gap(e, {oracle::cn_seller(), oracle::cn_buyer()}) - 1.171) < 1e-3);
  CHECK(std::abs(mrs_gap(e, {oracle::cw_seller(), oracle::cw_buyer()}) - 0.854) < 1e-3);
  try {
    mrs_gap(e, {{0.0, 3.0}, {3.0, 2.0}});
    FAIL("expected NotInterior");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNotInterior);
  }
}

TEST_CASE("mrs gaps across the corpus") {
  const Economy e = oracle::base_economy();
  for (int n : {1, 2, 5}) {
    const Economy r = build_replica(e, {ReplicaMode::kFull, n});
    const WalrasResult w = solve_walras(r);
    CHECK(mrs_gap(r, {w.allocation[r.sellers().front()], w.allocation[r.buyers().front()]}) < 1e-6);
  }
  for (const auto& l : all_concepts(e, {10, 100, 1000})) {
    if (l.summary.kind == Concept::kWalras) continue;
    CHECK(mrs_gap(e, {l.summary.seller, *l.summary.buyer}) > 0.1);
  }
}

TEST_CASE("find_pareto_dominating") {
  const Economy e = oracle::base_economy();
  SUBCASE("Walras allocation is undominated") {
    CHECK_FALSE(find_pareto_dominating(e, {oracle::walras_seller(), oracle::walras_buyer()}, 0.01));
  }
  SUBCASE("Cournot-Nash allocation") {
    const RoleAllocation a{oracle::cn_seller(), oracle::cn_buyer()};
    const auto w = find_pareto_dominating(e, a, 0.01);
    REQUIRE(w);
    check_witness(a, *w);
  }
  SUBCASE("Cournot-Walras allocation") {
    const RoleAllocation a{oracle::cw_seller(), oracle::cw_buyer()};
    const auto w = find_pareto_dominating(e, a, 0.01);
    REQUIRE(w);
    check_witness(a, *w);
  }
  SUBCASE("partial-replica limit allocation") {
    const RoleAllocation a{{1.0, 2.0}, {2.0, 3.0}};
    const auto w = find_pareto_dominating(e, a, 0.01);
    REQUIRE(w);
    check_witness(a, *w);
    // A concrete brute-force witness exists: good to buyers, money to sellers.
    const RoleAllocation t{{0.9, 2.08}, {2.1, 2.92}};
    CHECK(oracle::log_u(t.seller.x, t.seller.y) > oracle::log_u(1.0, 2.0));
    CHECK(oracle::quad_u(t.buyer.x, t.buyer.y) > oracle::quad_u(2.0, 3.0));
  }
  SUBCASE("infeasible start") {
    try {
      find_pareto_dominating(e, {{1.0, 2.0}, {2.0, 4.0}}, 0.01);
      FAIL("expected InfeasibleStart");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kInfeasibleStart);
    }
    CHECK_THROWS_AS(find_pareto_dominating(e, {{1.0, 2.0}, {2.0, 3.0}}, 0.0), Error);
  }
}

TEST_CASE("welfare_report") {
  const Economy e = oracle::base_economy();
  const WelfareReport r = welfare_report(e, all_concepts(e, {10, 100, 1000}));
  REQUIRE(r.rows.size() == 5);
  for (const WelfareRow& row : r.rows) {
    CAPTURE(row.label);
    REQUIRE(row.dominated);
    CHECK(*row.dominated == (row.label != "walras"));
  }
}
