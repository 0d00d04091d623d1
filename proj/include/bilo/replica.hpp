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

#ifndef BILO_REPLICA_HPP_
#define BILO_REPLICA_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bilo/economy.hpp"
#include "bilo/equilibrium.hpp"
#include "bilo/numerics.hpp"

namespace bilo {

enum class ReplicaGame { kCournotNash, kSpne };

std::string_view to_string(ReplicaGame g);
std::string_view to_string(ReplicaMode m);

struct ReplicaPoint {
  int n = 1;
  // 1 - (share of one buyer in the buyers' total weight), i.e. 1 - 1/(2n)
  // for a base economy with two buyers.
  double k = 0.0;
  std::optional<EquilibriumSummary> summary;  // empty when the solve failed
  std::string failure;
};

struct LimitEstimate {
  std::string quantity;
  double limit = 0.0;  // v_inf in v(n) = v_inf + c / n
  double rate = 0.0;   // c
};

struct ReplicaSequence {
  ReplicaMode mode = ReplicaMode::kPartialBuyers;
  ReplicaGame game = ReplicaGame::kCournotNash;
  std::vector<ReplicaPoint> points;
  std::vector<LimitEstimate> limits;  // filled by sweep when possible

  std::size_t successes() const;
};

// Solves the game on build_replica(base, {mode, n}) for each n. Failed points
// keep their error text and do not stop the sweep. n_values must be
// non-empty and strictly increasing.
ReplicaSequence sweep(const Economy& base, ReplicaMode mode, ReplicaGame game,
                      const std::vector<int>& n_values,
                      const Tolerance& tol = {});

// Least-squares fit of v_inf + c / n on the last three successful points,
// per quantity. Throws InsufficientPoints with fewer than three.
std::vector<LimitEstimate> estimate_limit(const ReplicaSequence& seq);

// Summary assembled from the fitted limits (estimated when seq.limits is
// empty). Diagnostics are those of the last successful point.
EquilibriumSummary limit_summary(const ReplicaSequence& seq);

struct GapRow {
  std::string quantity;
  double limit = 0.0;
  double benchmark = 0.0;
  double gap = 0.0;
  bool pass = false;
};

struct GapReport {
  std::vector<GapRow> rows;
  bool all_pass = false;
};

// |limit - benchmark| per quantity. Throws ShapeMismatch when the benchmark
// lacks a quantity carried by the sequence.
GapReport compare_to_benchmark(const ReplicaSequence& seq,
                               const EquilibriumSummary& benchmark,
                               double tolerance = 1e-3);

}  // namespace bilo

#endif  // BILO_REPLICA_HPP_
