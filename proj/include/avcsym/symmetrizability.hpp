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

#include <cstddef>
#include <optional>
#include <vector>

#include "avcsym/avc.hpp"
#include "avcsym/lp.hpp"
#include "json.hpp"

namespace avcsym {

// Decision slack added to epsilon so boundary cases do not flap with
// solver round-off.
inline constexpr double kDecisionSlack = 1e-8;
// Re-evaluated defect of the LP certificate must match the LP optimum to this.
inline constexpr double kCertificateTolerance = 1e-6;

// Where every variable and constraint family of the symmetrization LP lives.
//
// Variables: U(s|x) at x*S + s, then z(p, y) at X*S + p*Y + y for the p-th
// pair x < x_hat in lexicographic order, then (optionally) the scalar t.
// Equality rows: one per x. Inequality rows: for each pair and y the two
// linearization rows +d - z <= 0 and -d - z <= 0, then one budget row per pair.
struct SymLpLayout {
  std::size_t x_size = 0, s_size = 0, y_size = 0;
  bool has_t = false;

  std::size_t pairs() const { return x_size * (x_size - 1) / 2; }
  std::size_t u_count() const { return x_size * s_size; }
  std::size_t z_count() const { return pairs() * y_size; }
  std::size_t u_index(std::size_t x, std::size_t s) const { return x * s_size + s; }
  std::size_t z_index(std::size_t pair, std::size_t y) const {
    return u_count() + pair * y_size + y;
  }
  std::size_t t_index() const { return u_count() + z_count(); }

  std::size_t equality_rows() const { return x_size; }
  std::size_t bound_count() const { return u_count(); }
  std::size_t linearization_rows() const { return 2 * z_count(); }
  std::size_t budget_rows() const { return pairs(); }

  // n and m in the sense of the runtime estimate (U nonnegativity counted
  // as constraints, the scalar t excluded).
  std::size_t n() const { return u_count() + z_count(); }
  std::size_t m() const {
    return equality_rows() + bound_count() + linearization_rows() + budget_rows();
  }
};

SymLpLayout sym_lp_layout(const Avc& avc, bool with_t);

// Pure feasibility program: does some U keep every pair's defect <= epsilon?
lp::LinearProgram build_epsilon_sym_lp(const Avc& avc, double epsilon);

// Same constraints, every budget bounded by a shared t >= 0, minimizing t.
lp::LinearProgram build_f_value_lp(const Avc& avc);

struct LpStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t iterations = 0;
};

struct SymResult {
  double f_value = 0.0;
  JammerStrategy strategy;
  std::optional<double> epsilon;
  std::optional<bool> is_eps_symmetrizable;
  LpStats lp_stats;
};

// Minimal worst-pair symmetrization defect over all jammer strategies,
// computed as one LP. The minimizing strategy is re-checked with
// symmetrization_defect() before it is returned.
SymResult f_value(const Avc& avc);

// f_value(avc) <= epsilon (+ kDecisionSlack). Requires epsilon > 0.
SymResult is_epsilon_symmetrizable(const Avc& avc, double epsilon);

struct BruteForceResult {
  double value = 0.0;
  double lipschitz_bound = 0.0;  // L = 2*X*S*Y; value <= F + L*resolution
  std::size_t grid_points = 0;
  std::vector<double> best_strategy;  // flat [x][s]
};

inline constexpr std::size_t kBruteForceGridLimit = 100'000'000;

// Exhaustive minimum of the worst-pair defect over strategies whose rows lie
// on the simplex lattice {k * resolution}. 1/resolution must be an integer.
// Independent of the LP code path; meant as a test oracle.
BruteForceResult brute_force_f(const Avc& avc, double resolution);

struct RuntimeEstimate {
  std::size_t n = 0;
  std::size_t m = 0;
  double encoding_length = 0.0;  // L
  double predicted_order = 0.0;  // (n+m)^{3/2} * n * L
};

RuntimeEstimate runtime_estimate(const Avc& avc, double epsilon);

nlohmann::json to_json(const SymResult& result);

}  // namespace avcsym
