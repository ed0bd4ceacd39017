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

#include "avcsym/bosonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "avcsym/error.hpp"
#include "avcsym/format.hpp"
#include "avcsym/parallel.hpp"
#include "avcsym/quadrature.hpp"
#include "avcsym/symmetrizability.hpp"

namespace avcsym::bosonic {

using std::numbers::pi;

void BosonicParams::validate() const {
  if (m < 2) throw BadConstellation("M must be >= 2");
  if (!(energy > 0.0)) throw BadConstellation("energy must be > 0");
  if (!(noise_sender >= 0.0) || !(noise_jammer >= 0.0)) {
    throw InvalidArgument("thermal noise must be >= 0");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw EtaOutOfRange("eta = " + format_number(eta) + " is outside [0, 1]");
  }
  if (!(quad_tol > 0.0)) throw InvalidArgument("quad_tol must be > 0");
}

WedgeRegion wedge_region(std::size_t m_index, std::size_t m) {
  if (m < 2 || m_index >= m) throw BadConstellation("wedge index out of range");
  const double width = 2.0 * pi / static_cast<double>(m);
  const double center = width * static_cast<double>(m_index);
  return {m_index, center - 0.5 * width, center + 0.5 * width};
}

std::size_t decode_wedge(Complex point, std::size_t m) {
  if (m < 2) throw BadConstellation("M must be >= 2");
  const double width = 2.0 * pi / static_cast<double>(m);
  double theta = std::arg(point) + 0.5 * width;  // wedge 0 starts at -width/2
  theta = std::fmod(theta, 2.0 * pi);
  if (theta < 0.0) theta += 2.0 * pi;
  const auto k = static_cast<std::size_t>(std::floor(theta / width));
  return std::min(k, m - 1);
}

std::vector<Complex> psk_constellation(std::size_t m, double energy) {
  if (m < 2) throw BadConstellation("M must be >= 2, got " + std::to_string(m));
  if (!(energy > 0.0)) throw BadConstellation("energy must be > 0");
  std::vector<Complex> points;
  points.reserve(m);
  const double radius = std::sqrt(energy);
  for (std::size_t k = 0; k < m; ++k) {
    points.push_back(std::polar(radius, 2.0 * pi * static_cast<double>(k) /
                                            static_cast<double>(m)));
  }
  return points;
}

ThermalState beamsplitter_output(const ThermalState& sender,
                                 const ThermalState& jammer, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw EtaOutOfRange("eta = " + format_number(eta) + " is outside [0, 1]");
  }
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  return {t * sender.displacement + r * jammer.displacement,
          eta * sender.noise + (1.0 - eta) * jammer.noise};
}

double heterodyne_density(const ThermalState& state, Complex point) {
  const double var = state.noise + 1.0;
  return std::exp(-std::norm(state.displacement - point) / var) / (pi * var);
}

namespace {

// Heterodyne density integrated radially along the ray at angle theta:
//   int_0^inf r p(r e^{i theta}) dr
// With a = |alpha|, b = a cos(theta - phi), v = N + 1 this is
//   exp(-a^2/v) / (2 pi) + b / (2 sqrt(pi v)) exp(-(a sin(theta - phi))^2 / v)
//                                             * erfc(-b / sqrt(v)).
struct RayIntegral {
  double a, phi, v, sqrt_v, base;

  explicit RayIntegral(const ThermalState& state)
      : a(std::abs(state.displacement)),
        phi(std::arg(state.displacement)),
        v(state.noise + 1.0),
        sqrt_v(std::sqrt(v)),
        base(std::exp(-a * a / v) / (2.0 * pi)) {}

  double operator()(double theta) const {
    const double c = std::cos(theta - phi);
    const double s = std::sin(theta - phi);
    const double b = a * c;
    return base + b / (2.0 * std::sqrt(pi) * sqrt_v) * std::exp(-(a * s) * (a * s) / v) *
                      std::erfc(-b / sqrt_v);
  }
};

}  // namespace

double wedge_probability(const ThermalState& state, const WedgeRegion& region,
                         double quad_tol) {
  if (!(quad_tol > 0.0)) throw InvalidArgument("quad_tol must be > 0");
  if (!(state.noise >= 0.0)) throw InvalidArgument("thermal noise must be >= 0");
  RayIntegral ray(state);
  auto est = quad::integrate(ray, region.theta_minus, region.theta_plus, quad_tol);
  if (!est.converged) {
    std::ostringstream os;
    os << "wedge " << region.m_index << ": error estimate " << est.error
       << " above tolerance " << quad_tol;
    throw QuadratureFailure(os.str());
  }
  return std::clamp(est.value, 0.0, 1.0);
}

std::vector<double> wedge_distribution(const ThermalState& state, std::size_t m,
                                       double quad_tol) {
  std::vector<double> p(m);
  for (std::size_t y = 0; y < m; ++y) {
    p[y] = wedge_probability(state, wedge_region(y, m), quad_tol);
  }
  return p;
}

Avc build_mpsk_avc(const BosonicParams& params, std::size_t workers) {
  params.validate();
  const std::size_t M = params.m;
  const auto symbols = psk_constellation(M, params.energy);
  std::vector<double> w(M * M * M);
  parallel_for(M * M, workers, [&](std::size_t idx) {
    const std::size_t x = idx / M, s = idx % M;
    const ThermalState out = beamsplitter_output({symbols[x], params.noise_sender},
                                                 {symbols[s], params.noise_jammer},
                                                 params.eta);
    const auto row = wedge_distribution(out, M, params.quad_tol);
    std::copy(row.begin(), row.end(), w.begin() + static_cast<std::ptrdiff_t>(idx * M));
  });
  return validate_avc(w, M, M, M,
                      std::max(kRowSumTolerance, static_cast<double>(M) * params.quad_tol));
}

std::vector<EtaScanRow> eta_scan(const BosonicParams& params,
                                 const std::vector<double>& eta_values,
                                 std::size_t workers) {
  if (eta_values.empty()) throw InvalidArgument("no eta values given");
  for (double eta : eta_values) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw EtaOutOfRange("eta = " + format_number(eta) + " is outside [0, 1]");
    }
  }
  std::vector<EtaScanRow> rows(eta_values.size());
  parallel_for(eta_values.size(), workers, [&](std::size_t i) {
    BosonicParams p = params;
    p.eta = eta_values[i];
    const Avc avc = build_mpsk_avc(p);
    const SymResult r = f_value(avc);
    rows[i] = {p.eta, r.f_value, r.lp_stats.iterations};
  });
  return rows;
}

void write_eta_scan_csv(std::ostream& out, const std::vector<EtaScanRow>& rows) {
  out << "eta,f_value,lp_iterations\n";
  for (const auto& r : rows) {
    out << format_number(r.eta) << ',' << format_number(r.f_value) << ','
        << r.lp_iterations << '\n';
  }
}

nlohmann::json to_json(const BosonicParams& params) {
  return {{"m", params.m},
          {"energy", params.energy},
          {"noise_sender", params.noise_sender},
          {"noise_jammer", params.noise_jammer},
          {"eta", params.eta},
          {"quad_tol", params.quad_tol}};
}

}  // namespace avcsym::bosonic
