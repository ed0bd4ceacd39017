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

#include "avcsym/symmetrizability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "avcsym/error.hpp"

namespace avcsym {

SymLpLayout sym_lp_layout(const Avc& avc, bool with_t) {
  return {avc.x_size(), avc.s_size(), avc.y_size(), with_t};
}

namespace {

void require_pairs(const Avc& avc) {
  if (avc.x_size() < 2) {
    throw AlphabetTooSmall("need X >= 2, got X = " + std::to_string(avc.x_size()));
  }
}

// Shared constraint skeleton. When with_t is set the budget rows read
// sum_y z - t <= 0, otherwise sum_y z <= epsilon.
lp::LinearProgram build_constraints(const Avc& avc, const SymLpLayout& L,
                                    double epsilon) {
  const std::size_t X = L.x_size, S = L.s_size, Y = L.y_size;
  lp::LinearProgram prog(L.n() + (L.has_t ? 1 : 0));

  prog.variable_names.reserve(prog.num_variables());
  for (std::size_t x = 0; x < X; ++x) {
    for (std::size_t s = 0; s < S; ++s) {
      prog.variable_names.push_back("U(" + std::to_string(s) + "|" +
                                    std::to_string(x) + ")");
    }
  }
  for (std::size_t x = 0; x < X; ++x) {
    for (std::size_t xh = x + 1; xh < X; ++xh) {
      for (std::size_t y = 0; y < Y; ++y) {
        prog.variable_names.push_back("z(" + std::to_string(x) + "," +
                                      std::to_string(xh) + "," +
                                      std::to_string(y) + ")");
      }
    }
  }
  if (L.has_t) prog.variable_names.push_back("t");

  for (std::size_t x = 0; x < X; ++x) {
    const std::size_t r = prog.add_eq(1.0);
    for (std::size_t s = 0; s < S; ++s) prog.eq_matrix(r, L.u_index(x, s)) = 1.0;
  }

  // d(x, x_hat, y) = sum_s W(y|x,s) U(s|x_hat) - sum_s W(y|x_hat,s) U(s|x)
  std::size_t pair = 0;
  for (std::size_t x = 0; x < X; ++x) {
    for (std::size_t xh = x + 1; xh < X; ++xh, ++pair) {
      for (std::size_t y = 0; y < Y; ++y) {
        for (double sign : {1.0, -1.0}) {
          const std::size_t r = prog.add_ineq(0.0);
          for (std::size_t s = 0; s < S; ++s) {
            prog.ineq_matrix(r, L.u_index(xh, s)) += sign * avc(x, s, y);
            prog.ineq_matrix(r, L.u_index(x, s)) -= sign * avc(xh, s, y);
          }
          prog.ineq_matrix(r, L.z_index(pair, y)) = -1.0;
        }
      }
    }
  }
  for (std::size_t p = 0; p < L.pairs(); ++p) {
    const std::size_t r = prog.add_ineq(L.has_t ? 0.0 : epsilon);
    for (std::size_t y = 0; y < Y; ++y) prog.ineq_matrix(r, L.z_index(p, y)) = 1.0;
    if (L.has_t) prog.ineq_matrix(r, L.t_index()) = -1.0;
  }
  return prog;
}

}  // namespace

lp::LinearProgram build_epsilon_sym_lp(const Avc& avc, double epsilon) {
  require_pairs(avc);
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  return build_constraints(avc, sym_lp_layout(avc, false), epsilon);
}

lp::LinearProgram build_f_value_lp(const Avc& avc) {
  require_pairs(avc);
  const SymLpLayout layout = sym_lp_layout(avc, true);
  lp::LinearProgram prog = build_constraints(avc, layout, 0.0);
  prog.objective[layout.t_index()] = 1.0;
  return prog;
}

SymResult f_value(const Avc& avc) {
  const lp::LinearProgram prog = build_f_value_lp(avc);
  const SymLpLayout layout = sym_lp_layout(avc, true);
  const lp::LpOutcome outcome = lp::solve_lp(prog);
  if (outcome.status != lp::LpStatus::Optimal) {
    // U uniform with t = 2 is always feasible and t >= 0 bounds the objective.
    throw NumericalBreakdown(std::string("symmetrization LP reported ") +
                             lp::to_string(outcome.status));
  }

  const auto& point = *outcome.point;
  std::vector<double> u(point.begin(), point.begin() + layout.u_count());
  for (double& v : u) v = std::max(v, 0.0);
  JammerStrategy strategy = [&] {
    try {
      return validate_strategy(u, layout.x_size, layout.s_size);
    } catch (const Error& e) {
      throw NumericalBreakdown(std::string("LP strategy is not stochastic: ") + e.what());
    }
  }();

  const double value = std::max(*outcome.value, 0.0);
  const double recheck = symmetrization_defect(avc, strategy).max_defect;
  if (std::abs(recheck - value) > kCertificateTolerance) {
    std::ostringstream os;
    os << "LP optimum " << value << " but certificate defect " << recheck;
    throw NumericalBreakdown(os.str());
  }

  return SymResult{value,
                   std::move(strategy),
                   std::nullopt,
                   std::nullopt,
                   {layout.n(), layout.m(), outcome.iterations}};
}

SymResult is_epsilon_symmetrizable(const Avc& avc, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  SymResult r = f_value(avc);
  r.epsilon = epsilon;
  r.is_eps_symmetrizable = r.f_value <= epsilon + kDecisionSlack;
  return r;
}

namespace {

// All compositions of `total` into `parts` nonnegative integers, in
// lexicographic order.
void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts - 1, cur, out);
    cur.pop_back();
  }
}

// C(n, k) in floating point; only used for the size guard.
double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

}  // namespace

BruteForceResult brute_force_f(const Avc& avc, double resolution) {
  require_pairs(avc);
  if (!(resolution > 0.0) || resolution > 1.0) {
    throw InvalidArgument("resolution must lie in (0, 1]");
  }
  const double steps_real = 1.0 / resolution;
  const auto steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real) {
    throw InvalidArgument("1/resolution must be an integer");
  }
  const std::size_t X = avc.x_size(), S = avc.s_size(), Y = avc.y_size();

  const double per_row = binomial(steps + S - 1, S - 1);
  const double total = std::pow(per_row, static_cast<double>(X));
  if (total > static_cast<double>(kBruteForceGridLimit)) {
    std::ostringstream os;
    os << "simplex grid has " << total << " points (limit " << kBruteForceGridLimit << ")";
    throw GridTooLarge(os.str());
  }

  std::vector<std::vector<std::size_t>> lattice;
  std::vector<std::size_t> scratch;
  compositions(steps, S, scratch, lattice);
  const std::size_t P = lattice.size();

  // mix[(x * P + k) * Y + y] = sum_s W(y|x,s) * lattice_k(s) / steps
  std::vector<double> mix(X * P * Y, 0.0);
  for (std::size_t x = 0; x < X; ++x) {
    for (std::size_t k = 0; k < P; ++k) {
      double* out = &mix[(x * P + k) * Y];
      for (std::size_t s = 0; s < S; ++s) {
        const double weight = static_cast<double>(lattice[k][s]) / static_cast<double>(steps);
        for (std::size_t y = 0; y < Y; ++y) out[y] += avc(x, s, y) * weight;
      }
    }
  }

  std::vector<std::size_t> choice(X, 0), best_choice(X, 0);
  double best = std::numeric_limits<double>::infinity();
  std::size_t visited = 0;
  for (;;) {
    ++visited;
    double worst = 0.0;
    for (std::size_t x = 0; x < X && worst < best; ++x) {
      for (std::size_t xh = x + 1; xh < X; ++xh) {
        const double* a = &mix[(x * P + choice[xh]) * Y];
        const double* b = &mix[(xh * P + choice[x]) * Y];
        double d = 0.0;
        for (std::size_t y = 0; y < Y; ++y) d += std::abs(a[y] - b[y]);
        worst = std::max(worst, d);
      }
    }
    if (worst < best) {
      best = worst;
      best_choice = choice;
    }
    std::size_t i = 0;
    while (i < X && ++choice[i] == P) choice[i++] = 0;
    if (i == X) break;
  }

  BruteForceResult r;
  r.value = best;
  r.lipschitz_bound = 2.0 * static_cast<double>(X * S * Y);
  r.grid_points = visited;
  r.best_strategy.reserve(X * S);
  for (std::size_t x = 0; x < X; ++x) {
    for (std::size_t s = 0; s < S; ++s) {
      r.best_strategy.push_back(static_cast<double>(lattice[best_choice[x]][s]) /
                                static_cast<double>(steps));
    }
  }
  return r;
}

RuntimeEstimate runtime_estimate(const Avc& avc, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  const SymLpLayout layout = sym_lp_layout(avc, false);
  const double X = static_cast<double>(avc.x_size());
  const double S = static_cast<double>(avc.s_size());
  const double Y = static_cast<double>(avc.y_size());
  RuntimeEstimate e;
  e.n = layout.n();
  e.m = layout.m();
  // Bit length of the instance at precision epsilon; grows as epsilon shrinks.
  e.encoding_length = std::max(1.0, std::log2((X * X * Y + X * S) / epsilon));
  const double nm = static_cast<double>(e.n + e.m);
  e.predicted_order = std::pow(nm, 1.5) * static_cast<double>(e.n) * e.encoding_length;
  return e;
}

nlohmann::json to_json(const SymResult& result) {
  nlohmann::json j;
  j["f_value"] = result.f_value;
  j["epsilon"] = result.epsilon ? nlohmann::json(*result.epsilon) : nlohmann::json();
  j["symmetrizable"] = result.is_eps_symmetrizable
                           ? nlohmann::json(*result.is_eps_symmetrizable)
                           : nlohmann::json();
  j["u"] = result.strategy.to_rows();
  j["lp"] = {{"n", result.lp_stats.n},
             {"m", result.lp_stats.m},
             {"iterations", result.lp_stats.iterations}};
  return j;
}

}  // namespace avcsym
