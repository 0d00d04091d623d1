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

#include "bilo/equilibrium.hpp"

namespace bilo {

std::string_view to_string(Concept c) {
  switch (c) {
    case Concept::kWalras: return "walras";
    case Concept::kCournot: return "cournot";
    case Concept::kCournotWalras: return "cournot-walras";
    case Concept::kCournotNash: return "nash";
    case Concept::kSpne: return "spne";
  }
  return "unknown";
}

std::optional<Concept> parse_concept(std::string_view name) {
  for (Concept c : {Concept::kWalras, Concept::kCournot, Concept::kCournotWalras,
                    Concept::kCournotNash, Concept::kSpne})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::vector<std::pair<std::string, double>> quantities(
    const EquilibriumSummary& s) {
  std::vector<std::pair<std::string, double>> out;
  if (s.offer) out.emplace_back("offer", *s.offer);
  if (s.bid) out.emplace_back("bid", *s.bid);
  out.emplace_back("price", s.price);
  out.emplace_back("seller_x", s.seller.x);
  out.emplace_back("seller_y", s.seller.y);
  if (s.buyer) {
    out.emplace_back("buyer_x", s.buyer->x);
    out.emplace_back("buyer_y", s.buyer->y);
  }
  return out;
}

}  // namespace bilo
