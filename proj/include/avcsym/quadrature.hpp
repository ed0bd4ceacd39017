/**
 * Copyright 2026 The avcsym Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace avcsym::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  bool converged = true;
};

// One 7-point Gauss / 15-point Kronrod panel on [a, b]. The error estimate is
// |K15 - G7|.
template <class F>
Estimate gauss_kronrod_panel(F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = f0 * wg[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double pair = f(mid + half * xk[i]) + f(mid - half * xk[i]);
    kronrod += pair * wk[i];
    if (i % 2 == 0) gauss += pair * wg[i / 2];
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), true};
}

// Globally adaptive G7/K15 with an absolute error target: the panel with the
// largest error estimate is bisected until the summed estimate is at most
// `abs_tol` or `max_panels` is reached (then converged = false). `min_panels`
// forces an initial uniform split so narrow features are not skipped.
template <class F>
Estimate integrate(F&& f, double a, double b, double abs_tol,
                   std::size_t max_panels = 2000, std::size_t min_panels = 1) {
  if (a == b) return {};
  struct Panel {
    double a, b;
    Estimate est;
    bool operator<(const Panel& o) const { return est.error < o.est.error; }
  };
  std::priority_queue<Panel> heap;
  double total = 0.0, error = 0.0;
  const std::size_t initial = std::max<std::size_t>(min_panels, 1);
  for (std::size_t k = 0; k < initial; ++k) {
    const double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(initial);
    const double hi = k + 1 == initial
                          ? b
                          : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(initial);
    Estimate e = gauss_kronrod_panel(f, lo, hi);
    total += e.value;
    error += e.error;
    heap.push({lo, hi, e});
  }
  std::size_t panels = initial;
  while (error > abs_tol && panels < max_panels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Estimate left = gauss_kronrod_panel(f, worst.a, mid);
    Estimate right = gauss_kronrod_panel(f, mid, worst.b);
    total += left.value + right.value - worst.est.value;
    error += left.error + right.error - worst.est.error;
    heap.push({worst.a, mid, left});
    heap.push({mid, worst.b, right});
    ++panels;
  }
  // Re-sum so the reported value does not carry the running-sum drift.
  double value = 0.0, err = 0.0;
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  for (const auto& p : all) {
    value += p.est.value;
    err += p.est.error;
  }
  return {value, err, err <= abs_tol};
}

// Nodes and weights of the 7-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre7 {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const GaussLegendre7& get();
};

inline const GaussLegendre7& GaussLegendre7::get() {
  static const GaussLegendre7 rule = [] {
    using G = boost::math::quadrature::gauss<double, 7>;
    GaussLegendre7 r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = x.size(); i-- > 1;) {
      r.nodes.push_back(-x[i]);
      r.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

}  // namespace avcsym::quad
