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
#include <span>
#include <string>
#include <vector>

namespace avcsym::lp {

inline constexpr double kFeasibilityTolerance = 1e-8;
inline constexpr double kPivotTolerance = 1e-12;

// Row-major dense matrix with a fixed column count.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t cols) : cols_(cols) {}
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  // Appends a zero row and returns its index.
  std::size_t append_row() {
    data_.resize(data_.size() + cols_, 0.0);
    return rows_++;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// minimize c'v  subject to  A_eq v = b_eq,  A_ineq v <= b_ineq,  v >= lower.
struct LinearProgram {
  std::vector<double> objective;
  DenseMatrix eq_matrix;
  std::vector<double> eq_rhs;
  DenseMatrix ineq_matrix;
  std::vector<double> ineq_rhs;
  std::vector<double> lower_bounds;  // empty means all zero
  std::vector<std::string> variable_names;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t num_variables)
      : objective(num_variables, 0.0),
        eq_matrix(num_variables),
        ineq_matrix(num_variables) {}

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_eq() const { return eq_matrix.rows(); }
  std::size_t num_ineq() const { return ineq_matrix.rows(); }
  double lower_bound(std::size_t j) const {
    return lower_bounds.empty() ? 0.0 : lower_bounds[j];
  }

  // Row builders; the returned index addresses the new row.
  std::size_t add_eq(double rhs) {
    eq_rhs.push_back(rhs);
    return eq_matrix.append_row();
  }
  std::size_t add_ineq(double rhs) {
    ineq_rhs.push_back(rhs);
    return ineq_matrix.append_row();
  }

  // Throws DimensionMismatch when the pieces disagree in size.
  void check_dimensions() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::optional<double> value;               // present iff Optimal
  std::optional<std::vector<double>> point;  // present iff Optimal
  std::size_t iterations = 0;
  double phase_one_residual = 0.0;  // sum of artificials at the phase-1 optimum
};

struct SolverOptions {
  double feasibility_tolerance = kFeasibilityTolerance;
  double pivot_tolerance = kPivotTolerance;
  double optimality_tolerance = 1e-9;
  // Dantzig pricing until this many consecutive degenerate pivots, then
  // Bland's rule until the next nondegenerate step.
  std::size_t bland_after_degenerate = 1000;
  // Zero selects the default of 50 * (rows + cols).
  std::size_t iteration_limit = 0;
  // The tableau is recomputed from the original rows and the current basis
  // after this many pivots and before every optimality or unboundedness
  // verdict. Zero disables the periodic rebuild.
  std::size_t refactor_interval = 100;
};

// Two-phase primal simplex on a dense tableau. Deterministic: identical
// programs produce bitwise-identical outcomes. An Optimal point is always
// re-verified against the original constraints; failure to verify raises
// NumericalBreakdown.
LpOutcome solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

struct Violation {
  enum class Kind { Equality, Inequality, LowerBound };
  Kind kind;
  std::size_t index;  // row for constraints, variable for bounds
  double residual;    // amount by which the constraint is violated
};

std::vector<Violation> verify_point(const LinearProgram& lp,
                                    std::span<const double> point,
                                    double tol = kFeasibilityTolerance);

}  // namespace avcsym::lp
