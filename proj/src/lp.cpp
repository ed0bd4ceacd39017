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

#include "avcsym/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "avcsym/error.hpp"

namespace avcsym::lp {

void LinearProgram::check_dimensions() const {
  const std::size_t n = num_variables();
  if (eq_matrix.cols() != n || ineq_matrix.cols() != n) {
    throw DimensionMismatch("constraint matrices must have one column per variable");
  }
  if (eq_rhs.size() != eq_matrix.rows()) {
    throw DimensionMismatch("b_eq length differs from A_eq row count");
  }
  if (ineq_rhs.size() != ineq_matrix.rows()) {
    throw DimensionMismatch("b_ineq length differs from A_ineq row count");
  }
  if (!lower_bounds.empty() && lower_bounds.size() != n) {
    throw DimensionMismatch("lower_bounds length differs from variable count");
  }
  if (!variable_names.empty() && variable_names.size() != n) {
    throw DimensionMismatch("variable_names length differs from variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lower_bound(j))) {
      throw InvalidArgument("lower bounds must be finite");
    }
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

std::vector<Violation> verify_point(const LinearProgram& lp,
                                    std::span<const double> point, double tol) {
  lp.check_dimensions();
  if (point.size() != lp.num_variables()) {
    throw DimensionMismatch("point has " + std::to_string(point.size()) +
                            " coordinates, program has " +
                            std::to_string(lp.num_variables()) + " variables");
  }
  std::vector<Violation> out;
  auto dot = [&](std::span<const double> row) {
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * point[j];
    return acc;
  };
  for (std::size_t i = 0; i < lp.num_eq(); ++i) {
    double r = std::abs(dot(lp.eq_matrix.row(i)) - lp.eq_rhs[i]);
    if (r > tol) out.push_back({Violation::Kind::Equality, i, r});
  }
  for (std::size_t i = 0; i < lp.num_ineq(); ++i) {
    double r = dot(lp.ineq_matrix.row(i)) - lp.ineq_rhs[i];
    if (r > tol) out.push_back({Violation::Kind::Inequality, i, r});
  }
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    double r = lp.lower_bound(j) - point[j];
    if (r > tol) out.push_back({Violation::Kind::LowerBound, j, r});
  }
  return out;
}

namespace {

// Dense simplex tableau. Rows [0, m) are constraints; row m holds the
// phase-2 reduced costs and row m+1 the phase-1 reduced costs. The last
// column is the right-hand side; in cost rows it holds minus the objective.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SolverOptions& opt) : opt_(opt) {
    n_ = lp.num_variables();
    const std::size_t E = lp.num_eq(), I = lp.num_ineq();
    m_ = E + I;

    std::vector<double> shifted_eq(E), shifted_ineq(I);
    for (std::size_t i = 0; i < E; ++i) {
      double acc = lp.eq_rhs[i];
      auto row = lp.eq_matrix.row(i);
      for (std::size_t j = 0; j < n_; ++j) acc -= row[j] * lp.lower_bound(j);
      shifted_eq[i] = acc;
    }
    std::size_t artificials = E;
    for (std::size_t i = 0; i < I; ++i) {
      double acc = lp.ineq_rhs[i];
      auto row = lp.ineq_matrix.row(i);
      for (std::size_t j = 0; j < n_; ++j) acc -= row[j] * lp.lower_bound(j);
      shifted_ineq[i] = acc;
      if (acc < 0.0) ++artificials;
    }

    slack_begin_ = n_;
    art_begin_ = n_ + I;
    cols_ = art_begin_ + artificials;
    width_ = cols_ + 1;
    t_.assign((m_ + 2) * width_, 0.0);
    basis_.assign(m_, 0);
    dropped_.assign(m_, false);

    std::size_t next_art = art_begin_;
    for (std::size_t i = 0; i < E; ++i) {
      const double sign = shifted_eq[i] < 0.0 ? -1.0 : 1.0;
      auto row = lp.eq_matrix.row(i);
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * row[j];
      rhs(i) = sign * shifted_eq[i];
      at(i, next_art) = 1.0;
      basis_[i] = next_art++;
    }
    for (std::size_t k = 0; k < I; ++k) {
      const std::size_t i = E + k;
      const double sign = shifted_ineq[k] < 0.0 ? -1.0 : 1.0;
      auto row = lp.ineq_matrix.row(k);
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * row[j];
      at(i, slack_begin_ + k) = sign;
      rhs(i) = sign * shifted_ineq[k];
      if (sign > 0.0) {
        basis_[i] = slack_begin_ + k;
      } else {
        at(i, next_art) = 1.0;
        basis_[i] = next_art++;
      }
    }

    // Phase-2 costs on structural columns only.
    for (std::size_t j = 0; j < n_; ++j) at(m_, j) = lp.objective[j];
    // Phase-1 reduced costs: c1 = 1 on artificials, priced out of the basis.
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (!is_artificial(j)) at(m_ + 1, j) -= at(i, j);
      }
    }

    limit_ = opt.iteration_limit ? opt.iteration_limit : 50 * (m_ + cols_);
    initial_.assign(t_.begin(), t_.begin() + static_cast<std::ptrdiff_t>(m_ * width_));
    objective_.assign(lp.objective.begin(), lp.objective.end());
  }

  bool has_artificials() const { return art_begin_ < cols_; }
  // Summed from the basic artificials rather than read off the cost row,
  // which drifts.
  double phase_one_objective() const {
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (is_artificial(basis_[i])) total += std::max(rhs(i), 0.0);
    }
    return total;
  }
  std::size_t iterations() const { return iterations_; }

  // Runs simplex on the given cost row. Returns false when unbounded.
  bool optimize(std::size_t cost_row, bool allow_artificial) {
    std::size_t degenerate_run = 0;
    for (;;) {
      if (cost_row == m_ + 1 && phase_one_objective() <= 0.1 * opt_.feasibility_tolerance) {
        return true;
      }
      const bool bland = degenerate_run >= opt_.bland_after_degenerate;
      const std::size_t enter = choose_entering(cost_row, allow_artificial, bland);
      if (enter == kNone) {
        if (!fresh_ && refactor()) continue;
        if (cost_row == m_ && repairs_ < kMaxRepairs && worst_row() != kNone) {
          ++repairs_;
          if (dual_repair(cost_row)) continue;
        }
        return true;
      }

      const std::size_t leave = choose_leaving(enter, bland);
      if (leave == kNone) {
        if (fresh_ || !refactor()) return false;
        continue;
      }

      if (iterations_ >= limit_) {
        throw IterationLimit("exceeded " + std::to_string(limit_) + " pivots");
      }
      // A leaving variable left slightly negative by an earlier Harris step
      // is reset to its bound so the step length is never negative.
      if (rhs(leave) < 0.0) rhs(leave) = 0.0;
      // Degenerate means the objective did not move measurably; tiny
      // positive steps count too, or Dantzig pricing can stall on them.
      const double gain = rhs(leave) / at(leave, enter) * -at(cost_row, enter);
      const double scale = 1.0 + std::abs(rhs(cost_row));
      pivot(leave, enter);
      degenerate_run = gain <= 1e-12 * scale ? degenerate_run + 1 : 0;
      if (opt_.refactor_interval != 0 && ++since_refactor_ >= opt_.refactor_interval) {
        refactor();
      }
    }
  }

  // After phase 1, replace artificial basics by structural/slack columns.
  // Rows with no usable entry are linearly dependent and get dropped.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      std::size_t best = kNone;
      double best_mag = 1e-9;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        const double mag = std::abs(at(i, j));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best == kNone) {
        dropped_[i] = true;
      } else {
        pivot(i, best);
      }
    }
  }

  std::vector<double> structural_solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rhs(i);
    }
    return x;
  }

  std::size_t rows() const { return m_; }

  // Row whose basic variable is below zero by more than a tenth of the
  // feasibility tolerance (the most negative one), or kNone.
  std::size_t worst_row() const {
    std::size_t worst = kNone;
    double lowest = -0.1 * opt_.feasibility_tolerance;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!dropped_[i] && rhs(i) < lowest) {
        lowest = rhs(i);
        worst = i;
      }
    }
    return worst;
  }

  // Dual simplex pivots that drive negative basic variables back to zero
  // while keeping reduced costs nonnegative. Used when a rebuilt optimal
  // tableau shows round-off infeasibility. Returns false if no pivot could
  // be made.
  bool dual_repair(std::size_t cost_row) {
    bool pivoted = false;
    for (std::size_t guard = 0; guard < 2 * m_ + 10; ++guard) {
      const std::size_t r = worst_row();
      if (r == kNone) break;
      std::size_t best = kNone;
      for (double floor : {1e-6, 1e-9, opt_.pivot_tolerance}) {
        double best_ratio = 0.0;
        for (std::size_t j = 0; j < art_begin_; ++j) {
          const double a = at(r, j);
          if (a >= -floor) continue;
          const double ratio = std::max(at(cost_row, j), 0.0) / -a;
          if (best == kNone || ratio < best_ratio ||
              (ratio == best_ratio && -a > -at(r, best))) {
            best = j;
            best_ratio = ratio;
          }
        }
        if (best != kNone) break;
      }
      if (best == kNone) break;
      if (iterations_ >= limit_) {
        throw IterationLimit("exceeded " + std::to_string(limit_) + " pivots");
      }
      pivot(r, best);
      pivoted = true;
    }
    if (pivoted) refactor();
    return pivoted;
  }

  // Rebuilds constraint and cost rows as B^-1 [A | b] from the initial
  // tableau, discarding accumulated round-off. Returns false (tableau
  // untouched) when the basis matrix is numerically singular.
  bool refactor() {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    since_refactor_ = 0;
    Eigen::MatrixXd basis(m_, m_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k < m_; ++k) basis(i, k) = initial_[i * width_ + basis_[k]];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (!(lu.rcond() > 1e-14)) return false;
    const Eigen::Map<const RowMajor> original(initial_.data(), m_, width_);
    const RowMajor rows = lu.solve(original);
    if (!rows.allFinite()) return false;

    std::copy(rows.data(), rows.data() + rows.size(), t_.begin());
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t i = 0; i < m_; ++i) at(i, basis_[k]) = i == k ? 1.0 : 0.0;
    }
    for (std::size_t cost_row : {m_, m_ + 1}) {
      double* row = &t_[cost_row * width_];
      for (std::size_t j = 0; j < width_; ++j) row[j] = base_cost(cost_row, j);
      for (std::size_t k = 0; k < m_; ++k) {
        const double c = base_cost(cost_row, basis_[k]);
        if (c == 0.0) continue;
        const double* r = &t_[k * width_];
        for (std::size_t j = 0; j < width_; ++j) row[j] -= c * r[j];
      }
      for (std::size_t k = 0; k < m_; ++k) row[basis_[k]] = 0.0;
    }
    fresh_ = true;
    return true;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }
  double& rhs(std::size_t r) { return t_[r * width_ + cols_]; }
  double rhs(std::size_t r) const { return t_[r * width_ + cols_]; }
  // Unreduced cost of column j in the phase-2 (row m) or phase-1 row.
  double base_cost(std::size_t cost_row, std::size_t j) const {
    if (cost_row == m_) return j < n_ ? objective_[j] : 0.0;
    return is_artificial(j) ? 1.0 : 0.0;
  }

  bool is_artificial(std::size_t col) const {
    return col >= art_begin_ && col < cols_;
  }

  std::size_t choose_entering(std::size_t cost_row, bool allow_artificial,
                              bool bland) const {
    const std::size_t limit = allow_artificial ? cols_ : art_begin_;
    std::size_t best = kNone;
    double best_val = -opt_.optimality_tolerance;
    for (std::size_t j = 0; j < limit; ++j) {
      const double r = at(cost_row, j);
      if (r < best_val) {
        best = j;
        if (bland) break;
        best_val = r;
      }
    }
    return best;
  }

  std::size_t choose_leaving(std::size_t enter, bool bland) const {
    // Prefer well-conditioned pivots; fall back to the hard pivot floor only
    // when nothing else is admissible.
    for (double floor : {1e-6, 1e-9, opt_.pivot_tolerance}) {
      const std::size_t best = bland ? bland_ratio(enter, floor) : harris_ratio(enter, floor);
      if (best != kNone) return best;
    }
    return kNone;
  }

  // Exact minimum ratio, ties to the smallest basic column index.
  std::size_t bland_ratio(std::size_t enter, double floor) const {
    std::size_t best = kNone;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (dropped_[i]) continue;
      const double a = at(i, enter);
      if (a <= floor) continue;
      const double ratio = std::max(rhs(i), 0.0) / a;
      if (best == kNone || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  // Harris two-pass test: bound the step with every basic variable allowed
  // to go infeasible by a small tolerance, then take the largest pivot among
  // rows whose exact ratio is within that bound.
  std::size_t harris_ratio(std::size_t enter, double floor) const {
    const double slack = 0.1 * opt_.feasibility_tolerance;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i) {
      if (dropped_[i]) continue;
      const double a = at(i, enter);
      if (a > floor) bound = std::min(bound, (std::max(rhs(i), 0.0) + slack) / a);
    }
    if (!std::isfinite(bound)) return kNone;
    std::size_t best = kNone;
    for (std::size_t i = 0; i < m_; ++i) {
      if (dropped_[i]) continue;
      const double a = at(i, enter);
      if (a <= floor || std::max(rhs(i), 0.0) / a > bound) continue;
      if (best == kNone || a > at(best, enter)) best = i;
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    if (std::abs(p) < opt_.pivot_tolerance) {
      std::ostringstream os;
      os << "pivot " << p << " at row " << r << ", column " << c;
      throw NumericalBreakdown(os.str());
    }
    double* prow = &t_[r * width_];
    const double inv = 1.0 / p;
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* row = &t_[i * width_];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    basis_[r] = c;
    ++iterations_;
    fresh_ = false;
  }

  const SolverOptions& opt_;
  std::size_t n_ = 0, m_ = 0;
  std::size_t slack_begin_ = 0, art_begin_ = 0, cols_ = 0, width_ = 0;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> dropped_;
  std::size_t iterations_ = 0;
  std::size_t limit_ = 0;
  std::vector<double> initial_;    // constraint rows as first built
  std::vector<double> objective_;  // phase-2 costs of structural columns
  std::size_t since_refactor_ = 0;
  std::size_t repairs_ = 0;
  static constexpr std::size_t kMaxRepairs = 20;
  bool fresh_ = false;             // no pivot since the last rebuild
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const SolverOptions& options) {
  lp.check_dimensions();
  Tableau tableau(lp, options);
  LpOutcome out;

  if (tableau.has_artificials()) {
    if (!tableau.optimize(tableau.rows() + 1, /*allow_artificial=*/true)) {
      throw NumericalBreakdown("phase-1 objective reported unbounded");
    }
    out.phase_one_residual = std::max(tableau.phase_one_objective(), 0.0);
    if (tableau.phase_one_objective() > options.feasibility_tolerance) {
      out.status = LpStatus::Infeasible;
      out.iterations = tableau.iterations();
      return out;
    }
    tableau.expel_artificials();
  }

  const bool bounded = tableau.optimize(tableau.rows(), /*allow_artificial=*/false);
  out.iterations = tableau.iterations();
  if (!bounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  std::vector<double> x = tableau.structural_solution();
  double value = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] += lp.lower_bound(j);
    value += lp.objective[j] * x[j];
  }
  auto violations = verify_point(lp, x, options.feasibility_tolerance);
  if (!violations.empty()) {
    std::ostringstream os;
    os << violations.size() << " constraint(s) violated at the final basis, worst residual "
       << std::max_element(violations.begin(), violations.end(),
                           [](const Violation& a, const Violation& b) {
                             return a.residual < b.residual;
                           })->residual;
    throw NumericalBreakdown(os.str());
  }
  out.status = LpStatus::Optimal;
  out.value = value;
  out.point = std::move(x);
  return out;
}

}  // namespace avcsym::lp
