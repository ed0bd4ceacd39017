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

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "avcsym/avc.hpp"
#include "avcsym/bosonic.hpp"

namespace avcsym::discretization {

using Complex = std::complex<double>;

// Jammer inputs are confined to the disk |beta|^2 <= energy_limit and
// approximated on a square lattice of side `pitch`.
struct GridSpec {
  double energy_limit = 16.0;  // E_S
  double pitch = 1.0;          // delta

  double radius() const;
  void validate() const;
};

// Half-open square [x0, x0 + side) x [y0, y0 + side).
struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 0.0;

  Complex midpoint() const { return {x0 + 0.5 * side, y0 + 0.5 * side}; }
  double area() const { return side * side; }
  bool contains(Complex p) const {
    return p.real() >= x0 && p.real() < x0 + side && p.imag() >= y0 &&
           p.imag() < y0 + side;
  }
};

// The lattice covers the bounding square [-R, R]^2 (R = sqrt(E_S)) with
// ceil(2R/delta) boxes per axis; only boxes that touch the disk are kept.
// Centers are box midpoints, pulled radially onto the disk when outside it.
struct JammerGrid {
  GridSpec spec;
  std::size_t per_axis = 0;
  std::vector<Box> boxes;
  std::vector<Complex> centers;
  // lattice cell (i, j) -> box index, or -1 when the cell misses the disk.
  std::vector<long> cell_to_box;

  std::size_t count() const { return boxes.size(); }

  // Box holding a disk point. Cells are half-open except on the outer edge
  // of the bounding square, which belongs to the last row/column. Points
  // outside the disk have no box.
  std::optional<std::size_t> locate(Complex s) const;
};

JammerGrid make_grid(const GridSpec& spec);

// Continuous jammer strategy u(s|x): one probability density per sender
// symbol x, vanishing outside the energy disk.
struct ContinuousStrategy {
  std::size_t x_size = 0;
  std::function<double(std::size_t x, Complex s)> density;
};

// Uniform on the disk for every x.
ContinuousStrategy uniform_disk_strategy(std::size_t x_size, double energy_limit);

// Isotropic Gaussian around centers[x] with standard deviation sigma per
// axis, truncated to the disk and renormalized there.
ContinuousStrategy truncated_gaussian_strategy(std::vector<Complex> centers,
                                               double sigma, double energy_limit);

// Mass of each box under the density (restricted to the disk), computed by
// nested adaptive quadrature to `tol` per box.
// Throws NormalizationFailure when a row's mass is off from 1 by > 1e-6.
JammerStrategy discretize_strategy(const ContinuousStrategy& strategy,
                                   const JammerGrid& grid, double tol = 1e-10);

// Mean over `box` of the output distribution w(.|s, x) for sender symbol
// `sender`, with the jammer input s ranging over the box. Tensorized 7-point
// Gauss-Legendre, refined by quadrisection until the averages of successive
// levels agree to params.quad_tol.
std::vector<double> box_average(const bosonic::BosonicParams& params,
                                Complex sender, const Box& box);

struct DiscretizedAvc {
  Avc avc;
  JammerGrid grid;
  bosonic::BosonicParams source_params;
};

// Channel with one jammer state per grid box: entry [x][i][y] is the box-i
// average of the continuous wedge probability.
DiscretizedAvc average_channel(const bosonic::BosonicParams& params,
                               const JammerGrid& grid, std::size_t workers = 1);

struct ConvergenceRow {
  double delta = 0.0;
  std::size_t s_delta = 0;
  std::size_t lp_n = 0;
  std::size_t lp_m = 0;
  double f_value = 0.0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  std::size_t lp_iterations = 0;
};

// F of the discretized channel for each pitch. delta_values must be strictly
// decreasing.
std::vector<ConvergenceRow> convergence_scan(const bosonic::BosonicParams& params,
                                             double energy_limit,
                                             const std::vector<double>& delta_values,
                                             std::size_t workers = 1);

// Header: delta,s_delta,lp_n,lp_m,f_value,build_seconds,solve_seconds.
// With include_timings = false the two timing columns are written as 0 so
// the file is reproducible byte for byte.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows,
                           bool include_timings = true);

}  // namespace avcsym::discretization
