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

#include <random>

#include "bilo/economy.hpp"
#include "bilo/error.hpp"
#include "oracles.hpp"

using namespace bilo;
using doctest::Approx;

TEST_CASE("utility_value") {
  CHECK(utility_value(LogQuasiLinear{1.0}, {0.0, 0.0}) == 0.0);
  const Bundle cw = oracle::cw_seller();
  CHECK(std::abs(utility_value(LogQuasiLinear{1.0}, cw) - 3.035) < 1e-3);
  const Bundle cn = oracle::cn_buyer();
  CHECK(std::abs(utility_value(QuadQuasiLinear{3.0, 1.0}, cn) - 7.158) < 1e-3);
  CHECK(utility_value(QuadQuasiLinear{2.0, 0.5}, {2.0, 1.0}) == Approx(4.0));
}

TEST_CASE("utility_marginals") {
  Marginals m = utility_marginals(LogQuasiLinear{1.0}, {0.0, 5.0});
  CHECK(m.du_dx == 1.0);
  CHECK(m.du_dy == 1.0);
  m = utility_marginals(QuadQuasiLinear{3.0, 1.0}, {3.0, 0.0});
  CHECK(m.du_dx == 0.0);
  CHECK(m.du_dy == 1.0);
  const double h = 1e-6;
  const double fd = (oracle::log_u(1.0 + h, 2.0) - oracle::log_u(1.0 - h, 2.0)) / (2 * h);
  m = utility_marginals(LogQuasiLinear{1.0}, {1.0, 2.0});
  CHECK(std::abs(m.du_dx - fd) < 1e-8);
  CHECK(m.du_dx == Approx(0.5));
}

TEST_CASE("curvature, choke price and unconstrained demand") {
  CHECK(utility_curvature_x(LogQuasiLinear{2.0}, 1.0) == Approx(-0.5));
  CHECK(utility_curvature_x(QuadQuasiLinear{3.0, 1.5}, 7.0) == -1.5);
  CHECK(choke_price(QuadQuasiLinear{3.0, 1.0}) == 3.0);
  CHECK(choke_price(LogQuasiLinear{2.0}) == 2.0);
  CHECK(unconstrained_demand_x(QuadQuasiLinear{3.0, 1.0}, 1.0) == 2.0);
  CHECK(unconstrained_demand_x(LogQuasiLinear{1.0}, 0.5) == 1.0);
}

TEST_CASE("marginals match central differences at random interior bundles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(0.01, 5.0), y(0.0, 10.0), p(0.2, 4.0);
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const UtilityFunction u = (i % 2) ? UtilityFunction{LogQuasiLinear{p(rng)}}
                                      : UtilityFunction{QuadQuasiLinear{p(rng), p(rng)}};
    const Bundle b{x(rng), y(rng)};
    const Marginals m = utility_marginals(u, b);
    const double fx = (utility_value(u, {b.x + h, b.y}) - utility_value(u, {b.x - h, b.y})) / (2 * h);
    const double fy = (utility_value(u, {b.x, b.y + h}) - utility_value(u, {b.x, b.y - h})) / (2 * h);
    REQUIRE(std::abs(m.du_dx - fx) < 1e-6);
    REQUIRE(std::abs(m.du_dy - fy) < 1e-6);
  }
}

TEST_CASE("quasi-linearity in money") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(0.0, 5.0), y(0.0, 10.0), t(0.0, 10.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 1000; ++i) {
    const UtilityFunction u = (i % 2) ? UtilityFunction{LogQuasiLinear{1.3}}
                                      : UtilityFunction{QuadQuasiLinear{3.0, 1.0}};
    const Bundle b{x(rng), y(rng)};
    const double dt = t(rng);
    const double lhs = utility_value(u, {b.x, b.y + dt}) - utility_value(u, b);
    // Exact up to the rounding of the two evaluations.
    REQUIRE(std::abs(lhs - dt) <= 8 * eps * std::max(1.0, std::abs(utility_value(u, {b.x, b.y + dt}))));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate_utility(LogQuasiLinear{0.0}), Error);
  CHECK_THROWS_AS(validate_utility(QuadQuasiLinear{3.0, -1.0}), Error);
  Agent s{0, Role::kSeller, {3.0, 1.0}, 1.0, LogQuasiLinear{1.0}};
  try {
    validate_agent(s);
    FAIL("expected corner violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
    CHECK(std::string(e.what()).find("corner endowment violated") != std::string::npos);
  }
  Agent b{1, Role::kBuyer, {0.0, 5.0}, 0.0, QuadQuasiLinear{3.0, 1.0}};
  CHECK_THROWS_AS(validate_agent(b), Error);
  b.weight = 1.0;
  CHECK_NOTHROW(validate_agent(b));
  CHECK_THROWS_AS(Economy({b}), Error);
  s.endowment = {3.0, 0.0};
  CHECK_THROWS_AS(Economy({s}), Error);
  CHECK_NOTHROW(Economy({s, b}));
}

TEST_CASE("economy role views") {
  const Economy e = oracle::base_economy();
  CHECK(e.size() == 4);
  CHECK(e.sellers().size() == 2);
  CHECK(e.buyers().size() == 2);
  CHECK(e.role_position(3) == 1);
  CHECK(e.seller_mass() == 2.0);
  CHECK(e.buyer_mass() == 2.0);
  auto cls = symmetric_roles(e);
  REQUIRE(cls);
  CHECK(cls->seller_count == 2);
  CHECK(cls->buyer_count == 2);
  std::vector<Agent> agents = e.agents();
  agents[3].endowment.y = 6.0;
  CHECK_FALSE(symmetric_roles(Economy(agents)));
}

TEST_CASE("weighted_totals") {
  const Totals t = weighted_totals(oracle::base_economy());
  CHECK(t.x == 6.0);
  CHECK(t.y == 10.0);
  for (int n : {1, 3, 10, 100}) {
    const Totals r = weighted_totals(build_replica(oracle::base_economy(), {ReplicaMode::kPartialBuyers, n}));
    CHECK(r.x == Approx(6.0).epsilon(1e-14));
    CHECK(r.y == Approx(10.0).epsilon(1e-14));
  }
}

TEST_CASE("build_replica") {
  const Economy base = oracle::base_economy();
  SUBCASE("partial n = 1 is the base economy up to ids") {
    const Economy r = build_replica(base, {ReplicaMode::kPartialBuyers, 1});
    REQUIRE(r.size() == base.size());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(interchangeable(r.agent(i), base.agent(i)));
  }
  SUBCASE("partial n = 3") {
    const Economy r = build_replica(base, {ReplicaMode::kPartialBuyers, 3});
    CHECK(r.size() == 8);
    CHECK(r.sellers().size() == 2);
    CHECK(r.buyers().size() == 6);
    for (std::size_t i : r.sellers()) CHECK(r.agent(i).weight == 1.0);
    for (std::size_t i : r.buyers()) CHECK(r.agent(i).weight == 1.0 / 3.0);
    CHECK(weighted_totals(r).y == Approx(10.0).epsilon(1e-14));
  }
  SUBCASE("full n = 5") {
    const Economy r = build_replica(base, {ReplicaMode::kFull, 5});
    CHECK(r.sellers().size() == 10);
    CHECK(r.buyers().size() == 10);
    for (const Agent& a : r.agents()) CHECK(a.weight == 0.2);
    CHECK(weighted_totals(r).x == Approx(6.0).epsilon(1e-14));
    CHECK(weighted_totals(r).y == Approx(10.0).epsilon(1e-14));
  }
  SUBCASE("ids are renumbered") {
    const Economy r = build_replica(base, {ReplicaMode::kFull, 2});
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r.agent(i).id == i);
  }
  SUBCASE("n = 0 rejected") {
    CHECK_THROWS_AS(build_replica(base, {ReplicaMode::kPartialBuyers, 0}), Error);
  }
}

TEST_CASE("replica totals and corners hold for n up to 1000") {
  const Economy base = oracle::base_economy();
  const Totals t0 = weighted_totals(base);
  for (ReplicaMode mode : {ReplicaMode::kPartialBuyers, ReplicaMode::kFull}) {
    for (int n = 1; n <= 1000; n = n < 10 ? n + 1 : n * 10 / 3 + 1) {
      const Economy r = build_replica(base, {mode, n});
      const Totals t = weighted_totals(r);
      REQUIRE(std::abs(t.x - t0.x) <= 1e-12);
      REQUIRE(std::abs(t.y - t0.y) <= 1e-12);
      const std::size_t expected = mode == ReplicaMode::kFull ? 4 * n : 2 + 2 * n;
      REQUIRE(r.size() == expected);
      for (const Agent& a : r.agents()) REQUIRE_NOTHROW(validate_agent(a));
    }
    const Totals t = weighted_totals(build_replica(base, {mode, 1000}));
    CHECK(std::abs(t.x - t0.x) <= 1e-12);
    CHECK(std::abs(t.y - t0.y) <= 1e-12);
  }
}
