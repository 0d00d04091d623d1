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

#ifndef BILO_NUMERICS_HPP_
#define BILO_NUMERICS_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bilo/error.hpp"

namespace bilo {

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iter = 200;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1)
      throw Error(ErrorCode::kInvalidArgument,
                  "tolerances must be positive and max_iter >= 1");
  }

  // Both absolute and relative tolerances divided by `factor`.
  Tolerance tightened(double factor) const {
    return {abs_tol / factor, rel_tol / factor, max_iter};
  }

  friend bool operator==(const Tolerance&, const Tolerance&) = default;
};

struct SolveDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string path;
};

struct RootResult {
  double root = 0.0;
  SolveDiagnostics diag;
};

// Safeguarded secant: a secant step through the two most recent iterates is
// taken when it lands strictly inside the bracket; otherwise, or when the
// bracket failed to halve over the last two steps, the midpoint is used.
template <class F>
RootResult find_root(F&& f, double lo, double hi, const Tolerance& tol) {
  if (!(lo < hi))
    throw Error(ErrorCode::kInvalidArgument, "find_root needs lo < hi");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  auto done = [&](double x, double fx, int it, const char* how) {
    return RootResult{x, {it, std::abs(fx), true, how}};
  };
  if (std::abs(fa) <= tol.abs_tol) return done(a, fa, 0, "endpoint lo");
  if (std::abs(fb) <= tol.abs_tol) return done(b, fb, 0, "endpoint hi");
  if ((fa > 0.0) == (fb > 0.0))
    throw Error(ErrorCode::kNoBracket,
                "f(" + std::to_string(lo) + ")=" + std::to_string(fa) + ", f(" +
                    std::to_string(hi) + ")=" + std::to_string(fb));

  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  double width_before = 2.0 * (b - a);
  double width_prev = b - a;
  for (int it = 1; it <= tol.max_iter; ++it) {
    const double width = b - a;
    const double mid = 0.5 * (a + b);
    if (width <= tol.rel_tol * std::abs(mid) + tol.abs_tol) {
      const bool use_a = std::abs(fa) < std::abs(fb);
      return done(use_a ? a : b, use_a ? fa : fb, it - 1, "bracket width");
    }
    double x = mid;
    const bool stalled = width > 0.5 * width_before;
    if (!stalled && f1 != f0) {
      const double s = x1 - f1 * (x1 - x0) / (f1 - f0);
      if (s > a && s < b) x = s;
    }
    const double fx = f(x);
    if (std::abs(fx) <= tol.abs_tol) return done(x, fx, it, "residual");
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = fx;
    width_before = width_prev;
    width_prev = width;
  }
  throw Error(ErrorCode::kMaxIterations, "find_root exhausted its budget");
}

struct MaxResult {
  double argmax = 0.0;
  double value = 0.0;
  SolveDiagnostics diag;
};

namespace detail {

// Steps of size `h` uphill until neither neighbour is strictly better.
template <class G>
void polish_on_lattice(G& g, double lo, double hi, double h, int budget,
                       double& x, double& gx) {
  for (int i = 0; i < budget; ++i) {
    const double right = std::min(hi, x + h);
    const double left = std::max(lo, x - h);
    const double gr = g(right), gl = g(left);
    if (gr > gx && gr >= gl) {
      x = right;
      gx = gr;
    } else if (gl > gx) {
      x = left;
      gx = gl;
    } else {
      return;
    }
  }
}

}  // namespace detail

// Golden-section search on [lo, hi] followed by a comparison against both
// endpoints, so corner maxima come back exactly at lo or hi.
template <class G>
MaxResult maximize_1d(G&& g, double lo, double hi, const Tolerance& tol) {
  if (!(lo <= hi))
    throw Error(ErrorCode::kInvalidArgument, "maximize_1d needs lo <= hi");
  if (lo == hi) return {lo, g(lo), {0, 0.0, true, "degenerate interval"}};
  constexpr double kInvPhi = 0.6180339887498949;
  const double target = tol.rel_tol * (hi - lo) + tol.abs_tol;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double gc = g(c), gd = g(d);
  int it = 0;
  while (b - a > target) {
    if (++it > tol.max_iter)
      throw Error(ErrorCode::kMaxIterations, "maximize_1d exhausted its budget");
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  double x = gc >= gd ? c : d;
  double gx = std::max(gc, gd);
  detail::polish_on_lattice(g, lo, hi, tol.abs_tol, tol.max_iter, x, gx);
  std::string path = "golden section";
  const double glo = g(lo), ghi = g(hi);
  if (glo >= gx && glo >= ghi) {
    x = lo;
    gx = glo;
    path = "corner lo";
  } else if (ghi >= gx) {
    x = hi;
    gx = ghi;
    path = "corner hi";
  }
  return {x, gx, {it, b - a, true, path}};
}

// Maximizer for payoffs with a known marginal `dg`: corner when the marginal
// does not change sign, otherwise the bracketed root of the marginal. The
// winner is compared against both endpoints on `g` itself.
template <class G, class DG>
MaxResult maximize_concave_1d(G&& g, DG&& dg, double lo, double hi,
                              const Tolerance& tol) {
  if (!(lo <= hi))
    throw Error(ErrorCode::kInvalidArgument, "maximize needs lo <= hi");
  if (lo == hi) return {lo, g(lo), {0, 0.0, true, "degenerate interval"}};
  const double dlo = dg(lo), dhi = dg(hi);
  double x;
  SolveDiagnostics diag{0, 0.0, true, ""};
  if (dlo <= 0.0) {
    x = lo;
    diag.path = "corner lo";
  } else if (dhi >= 0.0) {
    x = hi;
    diag.path = "corner hi";
  } else {
    RootResult r = find_root(dg, lo, hi, tol);
    x = r.root;
    diag = r.diag;
    diag.path = "marginal root (" + diag.path + ")";
  }
  double gx = g(x);
  const double glo = g(lo), ghi = g(hi);
  if (glo > gx && glo >= ghi) {
    x = lo;
    gx = glo;
    diag.path = "corner lo (endpoint check)";
  } else if (ghi > gx) {
    x = hi;
    gx = ghi;
    diag.path = "corner hi (endpoint check)";
  }
  return {x, gx, diag};
}

struct FixedPointOptions {
  double damping = 0.5;
  double floor = 1e-9;
  // Consecutive iterations a component may sit on the floor.
  int pinned_limit = 10;
};

struct FixedPointResult {
  Eigen::VectorXd point;
  SolveDiagnostics diag;
};

// x <- (1 - damping) x + damping map(x), clamped componentwise to >= floor,
// until successive iterates agree to abs_tol in the max norm.
template <class Map>
FixedPointResult damped_fixed_point(Map&& map, Eigen::VectorXd start,
                                    const Tolerance& tol,
                                    const FixedPointOptions& opt = {}) {
  if (!(opt.damping > 0.0 && opt.damping <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "damping must lie in (0, 1]");
  if ((start.array() <= opt.floor).any())
    throw Error(ErrorCode::kInvalidArgument,
                "fixed-point start must lie strictly above the floor");
  Eigen::VectorXd x = std::move(start);
  Eigen::VectorXi pinned = Eigen::VectorXi::Zero(x.size());
  for (int it = 1; it <= tol.max_iter; ++it) {
    const Eigen::VectorXd mapped = map(static_cast<const Eigen::VectorXd&>(x));
    Eigen::VectorXd next = (1.0 - opt.damping) * x + opt.damping * mapped;
    next = next.cwiseMax(opt.floor);
    const double step = (next - x).lpNorm<Eigen::Infinity>();
    for (Eigen::Index i = 0; i < next.size(); ++i) {
      pinned[i] = next[i] <= opt.floor ? pinned[i] + 1 : 0;
      if (pinned[i] >= opt.pinned_limit)
        throw Error(ErrorCode::kCollapsedToFloor,
                    "component " + std::to_string(i) + " pinned at floor for " +
                        std::to_string(pinned[i]) + " iterations");
    }
    x = std::move(next);
    // A component resting on the floor is not a fixed point; keep iterating
    // until it leaves or the pinned limit trips.
    if (step <= tol.abs_tol && pinned.maxCoeff() == 0)
      return {std::move(x), {it, step, true, "damped best response"}};
  }
  throw Error(ErrorCode::kMaxIterations,
              "fixed point not reached in " + std::to_string(tol.max_iter) +
                  " iterations");
}

}  // namespace bilo

#endif  // BILO_NUMERICS_HPP_
