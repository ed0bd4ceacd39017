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
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace avcsym {

inline constexpr double kRowSumTolerance = 1e-9;

// Arbitrarily varying channel W(y|x,s), stored densely as [x][s][y].
//
// Instances only come out of validate_avc(), so every Avc in circulation is
// row-stochastic. The tensor is immutable after construction.
class Avc {
 public:
  std::size_t x_size() const { return x_size_; }
  std::size_t s_size() const { return s_size_; }
  std::size_t y_size() const { return y_size_; }

  double operator()(std::size_t x, std::size_t s, std::size_t y) const {
    return w_[(x * s_size_ + s) * y_size_ + y];
  }

  // Output distribution W(.|x,s).
  std::span<const double> row(std::size_t x, std::size_t s) const {
    return {w_.data() + (x * s_size_ + s) * y_size_, y_size_};
  }

  std::span<const double> data() const { return w_; }

  friend bool operator==(const Avc&, const Avc&) = default;

 private:
  friend Avc validate_avc(std::span<const double>, std::size_t, std::size_t,
                          std::size_t, double);
  Avc(std::size_t x, std::size_t s, std::size_t y, std::vector<double> w)
      : x_size_(x), s_size_(s), y_size_(y), w_(std::move(w)) {}

  std::size_t x_size_;
  std::size_t s_size_;
  std::size_t y_size_;
  std::vector<double> w_;
};

// Jammer strategy U(s|x), stored as [x][s]. Row-stochastic by construction.
class JammerStrategy {
 public:
  std::size_t x_size() const { return x_size_; }
  std::size_t s_size() const { return s_size_; }

  double operator()(std::size_t x, std::size_t s) const {
    return u_[x * s_size_ + s];
  }
  std::span<const double> row(std::size_t x) const {
    return {u_.data() + x * s_size_, s_size_};
  }
  std::span<const double> data() const { return u_; }

  std::vector<std::vector<double>> to_rows() const;

  // Convenience constructors for the two canonical strategies.
  static JammerStrategy identity(std::size_t size);
  static JammerStrategy uniform(std::size_t x_size, std::size_t s_size);

  friend bool operator==(const JammerStrategy&, const JammerStrategy&) = default;

 private:
  friend JammerStrategy validate_strategy(std::span<const double>, std::size_t,
                                          std::size_t, double);
  JammerStrategy(std::size_t x, std::size_t s, std::vector<double> u)
      : x_size_(x), s_size_(s), u_(std::move(u)) {}

  std::size_t x_size_;
  std::size_t s_size_;
  std::vector<double> u_;
};

// Per-pair L1 mismatch for a fixed jammer strategy.
struct DefectReport {
  struct PairDefect {
    std::size_t x;
    std::size_t x_hat;
    double defect;
  };
  std::vector<PairDefect> per_pair;  // lexicographic in (x, x_hat), x < x_hat
  double max_defect = 0.0;
};

// Checks shape, sign and row sums of a flat [x][s][y] tensor. Values are
// kept exactly as given; nothing is renormalized.
Avc validate_avc(std::span<const double> raw, std::size_t x_size,
                 std::size_t s_size, std::size_t y_size,
                 double tolerance = kRowSumTolerance);

// Nested [x][s][y] variant used by the JSON reader; ragged input is a
// ShapeMismatch.
Avc validate_avc(const std::vector<std::vector<std::vector<double>>>& raw,
                 double tolerance = kRowSumTolerance);

JammerStrategy validate_strategy(std::span<const double> raw,
                                 std::size_t x_size, std::size_t s_size,
                                 double tolerance = kRowSumTolerance);

// For each x < x_hat:
//   sum_y | sum_s W(y|x,s) U(s|x_hat) - sum_s W(y|x_hat,s) U(s|x) |
DefectReport symmetrization_defect(const Avc& avc, const JammerStrategy& u);

// 1/2 log2(1 + E/P) for P < E, zero otherwise.
double gaussian_avc_capacity(double sender_power, double jammer_power);

// Interchange format: {"x": X, "s": S, "y": Y, "w": [[[...]]]}.
nlohmann::json to_json(const Avc& avc);
Avc avc_from_json(const nlohmann::json& j,
                  double tolerance = kRowSumTolerance);

Avc read_avc_file(const std::string& path);
void write_avc_file(const Avc& avc, const std::string& path);

}  // namespace avcsym
