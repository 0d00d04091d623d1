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

#include "bilo/replica.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "bilo/bilateral.hpp"
#include "bilo/error.hpp"
#include "bilo/sequential.hpp"

namespace bilo {

std::string_view to_string(ReplicaGame g) {
  return g == ReplicaGame::kSpne ? "spne" : "nash";
}

std::string_view to_string(ReplicaMode m) {
  return m == ReplicaMode::kFull ? "full" : "partial";
}

std::size_t ReplicaSequence::successes() const {
  std::size_t count = 0;
  for (const ReplicaPoint& p : points) count += p.summary.has_value();
  return count;
}

ReplicaSequence sweep(const Economy& base, ReplicaMode mode, ReplicaGame game,
                      const std::vector<int>& n_values, const Tolerance& tol) {
  if (n_values.empty())
    throw Error(ErrorCode::kInvalidArgument, "sweep needs at least one n");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1)
      throw Error(ErrorCode::kInvalidArgument, "replica count n must be >= 1");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw Error(ErrorCode::kInvalidArgument, "n values must be increasing");
  }
  ReplicaSequence seq;
  seq.mode = mode;
  seq.game = game;
  const double base_buyers = static_cast<double>(base.buyers().size());
  for (int n : n_values) {
    ReplicaPoint point;
    point.n = n;
    point.k = 1.0 - 1.0 / (n * base_buyers);
    try {
      const Economy e = build_replica(base, {mode, n});
      point.summary = game == ReplicaGame::kSpne
                          ? solve_spne(e, tol).summary(e)
                          : solve_cournot_nash(e, tol).summary(e);
    } catch (const Error& err) {
      point.failure = err.what();
    }
    seq.points.push_back(std::move(point));
  }
  if (seq.successes() >= 3) seq.limits = estimate_limit(seq);
  return seq;
}

std::vector<LimitEstimate> estimate_limit(const ReplicaSequence& seq) {
  std::vector<const ReplicaPoint*> used;
  for (auto it = seq.points.rbegin(); it != seq.points.rend() && used.size() < 3;
       ++it)
    if (it->summary) used.insert(used.begin(), &*it);
  if (used.size() < 3)
    throw Error(ErrorCode::kInsufficientPoints,
                "limit fit needs three successful points, have " +
                    std::to_string(used.size()));

  Eigen::Matrix<double, 3, 2> design;
  for (int r = 0; r < 3; ++r) design.row(r) << 1.0, 1.0 / used[r]->n;
  const auto qr = design.colPivHouseholderQr();

  std::vector<LimitEstimate> out;
  for (const auto& [name, unused] : quantities(*used.back()->summary)) {
    Eigen::Vector3d values;
    for (int r = 0; r < 3; ++r) {
      bool found = false;
      for (const auto& [other, v] : quantities(*used[r]->summary))
        if (other == name) {
          values[r] = v;
          found = true;
        }
      if (!found)
        throw Error(ErrorCode::kShapeMismatch,
                    "quantity " + name + " missing at n=" +
                        std::to_string(used[r]->n));
    }
    const Eigen::Vector2d coef = qr.solve(values);
    out.push_back({name, coef[0], coef[1]});
  }
  return out;
}

EquilibriumSummary limit_summary(const ReplicaSequence& seq) {
  const std::vector<LimitEstimate> limits =
      seq.limits.empty() ? estimate_limit(seq) : seq.limits;
  EquilibriumSummary s;
  s.kind = seq.game == ReplicaGame::kSpne ? Concept::kSpne
                                             : Concept::kCournotNash;
  Bundle buyer;
  bool has_buyer = false;
  for (const LimitEstimate& l : limits) {
    if (l.quantity == "offer") s.offer = l.limit;
    else if (l.quantity == "bid") s.bid = l.limit;
    else if (l.quantity == "price") s.price = l.limit;
    else if (l.quantity == "seller_x") s.seller.x = l.limit;
    else if (l.quantity == "seller_y") s.seller.y = l.limit;
    else if (l.quantity == "buyer_x") buyer.x = l.limit, has_buyer = true;
    else if (l.quantity == "buyer_y") buyer.y = l.limit, has_buyer = true;
  }
  if (has_buyer) s.buyer = buyer;
  for (auto it = seq.points.rbegin(); it != seq.points.rend(); ++it)
    if (it->summary) {
      s.diagnostics = it->summary->diagnostics;
      break;
    }
  return s;
}

GapReport compare_to_benchmark(const ReplicaSequence& seq,
                               const EquilibriumSummary& benchmark,
                               double tolerance) {
  const std::vector<LimitEstimate> limits =
      seq.limits.empty() ? estimate_limit(seq) : seq.limits;
  const auto bench = quantities(benchmark);
  GapReport report;
  report.all_pass = true;
  for (const LimitEstimate& l : limits) {
    auto it = std::find_if(bench.begin(), bench.end(),
                           [&](const auto& q) { return q.first == l.quantity; });
    if (it == bench.end())
      throw Error(ErrorCode::kShapeMismatch,
                  "benchmark has no " + l.quantity + " to compare against");
    GapRow row{l.quantity, l.limit, it->second, std::abs(l.limit - it->second),
               false};
    row.pass = row.gap < tolerance;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bilo
