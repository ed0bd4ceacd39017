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

#include "avcsym/discretization.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "avcsym/error.hpp"
#include "avcsym/format.hpp"
#include "avcsym/parallel.hpp"
#include "avcsym/quadrature.hpp"
#include "avcsym/symmetrizability.hpp"

namespace avcsym::discretization {

using std::numbers::pi;

double GridSpec::radius() const { return std::sqrt(energy_limit); }

void GridSpec::validate() const {
  if (!(energy_limit > 0.0)) throw InvalidArgument("energy limit must be > 0");
  if (!(pitch > 0.0)) throw InvalidArgument("pitch must be > 0");
  if (pitch > 2.0 * radius() * (1.0 + 1e-12)) {
    throw PitchTooLarge("pitch " + format_number(pitch) + " exceeds disk diameter " +
                        format_number(2.0 * radius()));
  }
}

std::optional<std::size_t> JammerGrid::locate(Complex s) const {
  const double R = spec.radius();
  if (std::norm(s) > spec.energy_limit * (1.0 + 1e-12)) return std::nullopt;
  auto axis = [&](double v) {
    const double k = std::floor((v + R) / spec.pitch);
    return static_cast<std::size_t>(
        std::clamp(k, 0.0, static_cast<double>(per_axis - 1)));
  };
  const long b = cell_to_box[axis(s.imag()) * per_axis + axis(s.real())];
  if (b < 0) return std::nullopt;
  return static_cast<std::size_t>(b);
}

JammerGrid make_grid(const GridSpec& spec) {
  spec.validate();
  const double R = spec.radius();
  const double d = spec.pitch;
  JammerGrid grid;
  grid.spec = spec;
  // Guard against 2R/d landing a hair above an integer through rounding.
  grid.per_axis = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(2.0 * R / d - 1e-9)));
  const std::size_t n = grid.per_axis;
  grid.cell_to_box.assign(n * n, -1);

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      Box box{-R + static_cast<double>(i) * d, -R + static_cast<double>(j) * d, d};
      const double cx = std::clamp(0.0, box.x0, box.x0 + d);
      const double cy = std::clamp(0.0, box.y0, box.y0 + d);
      if (cx * cx + cy * cy > spec.energy_limit * (1.0 + 1e-12)) continue;

      Complex center = box.midpoint();
      if (std::norm(center) > spec.energy_limit) center *= R / std::abs(center);
      grid.cell_to_box[j * n + i] = static_cast<long>(grid.boxes.size());
      grid.boxes.push_back(box);
      grid.centers.push_back(center);
    }
  }
  return grid;
}

ContinuousStrategy uniform_disk_strategy(std::size_t x_size, double energy_limit) {
  if (!(energy_limit > 0.0)) throw InvalidArgument("energy limit must be > 0");
  const double inv_area = 1.0 / (pi * energy_limit);
  return {x_size, [energy_limit, inv_area](std::size_t, Complex s) {
            return std::norm(s) <= energy_limit ? inv_area : 0.0;
          }};
}

namespace {

// Integral of f over box intersected with the disk of radius R. The outer
// variable is split where the disk boundary crosses the box's horizontal
// edges so each panel's inner limits are smooth.
template <class F>
double integrate_box_in_disk(F&& f, const Box& box, double R, double tol) {
  const double xa = std::max(box.x0, -R);
  const double xb = std::min(box.x0 + box.side, R);
  if (xa >= xb) return 0.0;

  std::vector<double> cuts{xa, xb};
  for (double yedge : {box.y0, box.y0 + box.side}) {
    if (std::abs(yedge) < R) {
      const double h = std::sqrt(R * R - yedge * yedge);
      for (double c : {-h, h}) {
        if (c > xa && c < xb) cuts.push_back(c);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());

  auto column = [&](double x) {
    const double h = std::sqrt(std::max(0.0, R * R - x * x));
    const double ya = std::max(box.y0, -h);
    const double yb = std::min(box.y0 + box.side, h);
    if (ya >= yb) return 0.0;
    auto inner = quad::integrate([&](double y) { return f(Complex(x, y)); }, ya, yb,
                                 tol, 2000, 4);
    if (!inner.converged) {
      throw QuadratureFailure("inner box integral did not converge");
    }
    return inner.value;
  };

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 0.0) continue;
    auto outer = quad::integrate(column, cuts[k], cuts[k + 1], tol, 2000, 4);
    if (!outer.converged) {
      throw QuadratureFailure("outer box integral did not converge");
    }
    total += outer.value;
  }
  return total;
}

}  // namespace

ContinuousStrategy truncated_gaussian_strategy(std::vector<Complex> centers,
                                               double sigma, double energy_limit) {
  if (centers.empty()) throw InvalidArgument("no centers given");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be > 0");
  if (!(energy_limit > 0.0)) throw InvalidArgument("energy limit must be > 0");
  const double R = std::sqrt(energy_limit);
  const Box bounding{-R, -R, 2.0 * R};

  std::vector<double> norms;
  norms.reserve(centers.size());
  for (const Complex& c : centers) {
    auto g = [&](Complex s) { return std::exp(-std::norm(s - c) / (2.0 * sigma * sigma)); };
    norms.push_back(integrate_box_in_disk(g, bounding, R, 1e-13));
  }
  const std::size_t x_size = centers.size();
  return {x_size, [centers = std::move(centers), norms = std::move(norms), sigma,
                   energy_limit](std::size_t x, Complex s) {
            if (std::norm(s) > energy_limit) return 0.0;
            return std::exp(-std::norm(s - centers[x]) / (2.0 * sigma * sigma)) / norms[x];
          }};
}

JammerStrategy discretize_strategy(const ContinuousStrategy& strategy,
                                   const JammerGrid& grid, double tol) {
  if (!strategy.density || strategy.x_size == 0) {
    throw InvalidArgument("strategy has no density");
  }
  const std::size_t X = strategy.x_size, S = grid.count();
  const double R = grid.spec.radius();
  std::vector<double> u(X * S, 0.0);
  for (std::size_t x = 0; x < X; ++x) {
    double mass = 0.0;
    for (std::size_t i = 0; i < S; ++i) {
      const double v = integrate_box_in_disk(
          [&](Complex s) { return strategy.density(x, s); }, grid.boxes[i], R, tol);
      if (v < -1e-12) {
        throw NormalizationFailure("negative box mass for x=" + std::to_string(x));
      }
      u[x * S + i] = std::max(v, 0.0);
      mass += u[x * S + i];
    }
    if (std::abs(mass - 1.0) > 1e-6) {
      throw NormalizationFailure("row x=" + std::to_string(x) + " has mass " +
                                 format_number(mass));
    }
  }
  return validate_strategy(u, X, S, 1e-6);
}

namespace {

using Row = std::vector<double>;

Row evaluate_w(const bosonic::BosonicParams& params, Complex sender, Complex jammer) {
  const auto state = bosonic::beamsplitter_output({sender, params.noise_sender},
                                                  {jammer, params.noise_jammer},
                                                  params.eta);
  return bosonic::wedge_distribution(state, params.m, params.quad_tol);
}

// Tensorized 7x7 Gauss-Legendre average over the box.
Row gl_average(const bosonic::BosonicParams& params, Complex sender, const Box& box) {
  const auto& rule = quad::GaussLegendre7::get();
  const double h = 0.5 * box.side;
  const Complex mid = box.midpoint();
  Row avg(params.m, 0.0);
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
      const Complex s = mid + Complex(h * rule.nodes[a], h * rule.nodes[b]);
      const double weight = 0.25 * rule.weights[a] * rule.weights[b];
      const Row w = evaluate_w(params, sender, s);
      for (std::size_t y = 0; y < avg.size(); ++y) avg[y] += weight * w[y];
    }
  }
  return avg;
}

std::array<Box, 4> quarters(const Box& b) {
  const double h = 0.5 * b.side;
  return {Box{b.x0, b.y0, h}, Box{b.x0 + h, b.y0, h}, Box{b.x0, b.y0 + h, h},
          Box{b.x0 + h, b.y0 + h, h}};
}

Row refine(const bosonic::BosonicParams& params, Complex sender, const Box& box,
           const Row& coarse, int depth) {
  const auto parts = quarters(box);
  std::array<Row, 4> sub;
  Row fine(params.m, 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    sub[k] = gl_average(params, sender, parts[k]);
    for (std::size_t y = 0; y < fine.size(); ++y) fine[y] += 0.25 * sub[k][y];
  }
  double diff = 0.0;
  for (std::size_t y = 0; y < fine.size(); ++y) {
    diff = std::max(diff, std::abs(fine[y] - coarse[y]));
  }
  if (diff <= params.quad_tol) return fine;
  if (depth == 0) {
    std::ostringstream os;
    os << "box average at (" << box.x0 << ", " << box.y0 << ") side " << box.side
       << " still changes by " << diff;
    throw QuadratureFailure(os.str());
  }
  Row out(params.m, 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    const Row r = refine(params, sender, parts[k], sub[k], depth - 1);
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += 0.25 * r[y];
  }
  return out;
}

}  // namespace

std::vector<double> box_average(const bosonic::BosonicParams& params, Complex sender,
                                const Box& box) {
  params.validate();
  if (!(box.side > 0.0)) throw InvalidArgument("box side must be > 0");
  return refine(params, sender, box, gl_average(params, sender, box), 8);
}

DiscretizedAvc average_channel(const bosonic::BosonicParams& params,
                               const JammerGrid& grid, std::size_t workers) {
  params.validate();
  const std::size_t M = params.m, S = grid.count();
  if (S == 0) throw InvalidArgument("empty jammer grid");
  const auto symbols = bosonic::psk_constellation(M, params.energy);
  std::vector<double> w(M * S * M);
  parallel_for(M * S, workers, [&](std::size_t idx) {
    const std::size_t x = idx / S, i = idx % S;
    const Row r = box_average(params, symbols[x], grid.boxes[i]);
    std::copy(r.begin(), r.end(), w.begin() + static_cast<std::ptrdiff_t>(idx * M));
  });
  Avc avc = validate_avc(w, M, S, M,
                         std::max(kRowSumTolerance, static_cast<double>(M) * params.quad_tol));
  return {std::move(avc), grid, params};
}

std::vector<ConvergenceRow> convergence_scan(const bosonic::BosonicParams& params,
                                             double energy_limit,
                                             const std::vector<double>& delta_values,
                                             std::size_t workers) {
  params.validate();
  if (delta_values.empty()) throw InvalidArgument("no pitch values given");
  for (std::size_t k = 0; k < delta_values.size(); ++k) {
    GridSpec{energy_limit, delta_values[k]}.validate();
    if (k > 0 && !(delta_values[k] < delta_values[k - 1])) {
      throw InvalidArgument("pitch values must be strictly decreasing");
    }
  }

  using Clock = std::chrono::steady_clock;
  std::vector<ConvergenceRow> rows;
  for (double delta : delta_values) {
    ConvergenceRow row;
    row.delta = delta;
    const auto t0 = Clock::now();
    const JammerGrid grid = make_grid({energy_limit, delta});
    const DiscretizedAvc disc = average_channel(params, grid, workers);
    const auto t1 = Clock::now();
    const SymResult r = f_value(disc.avc);
    const auto t2 = Clock::now();

    const SymLpLayout layout = sym_lp_layout(disc.avc, false);
    row.s_delta = grid.count();
    row.lp_n = layout.n();
    row.lp_m = layout.m();
    row.f_value = r.f_value;
    row.lp_iterations = r.lp_stats.iterations;
    row.build_seconds = std::chrono::duration<double>(t1 - t0).count();
    row.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows,
                           bool include_timings) {
  out << "delta,s_delta,lp_n,lp_m,f_value,build_seconds,solve_seconds\n";
  for (const auto& r : rows) {
    out << format_number(r.delta) << ',' << r.s_delta << ',' << r.lp_n << ','
        << r.lp_m << ',' << format_number(r.f_value) << ','
        << format_number(include_timings ? r.build_seconds : 0.0) << ','
        << format_number(include_timings ? r.solve_seconds : 0.0) << '\n';
  }
}

}  // namespace avcsym::discretization
