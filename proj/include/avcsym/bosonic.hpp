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
#include <iosfwd>
#include <vector>

#include "avcsym/avc.hpp"
#include "json.hpp"

namespace avcsym::bosonic {

using Complex = std::complex<double>;

inline constexpr double kDefaultQuadTolerance = 1e-9;

// Displaced thermal state: coherent displacement (|displacement|^2 = mean
// signal photons) on top of `noise` mean thermal photons.
struct ThermalState {
  Complex displacement{0.0, 0.0};
  double noise = 0.0;
};

struct BosonicParams {
  std::size_t m = 6;       // constellation size M (= X = S = Y)
  double energy = 16.0;    // sender (and jammer) power E in photons
  double noise_sender = 1.0;
  double noise_jammer = 1.0;
  double eta = 0.5;        // beam-splitter transmittivity
  double quad_tol = kDefaultQuadTolerance;

  void validate() const;
};

// ML decision wedge for PSK symbol m_index: theta in [theta_minus, theta_plus).
struct WedgeRegion {
  std::size_t m_index = 0;
  double theta_minus = 0.0;
  double theta_plus = 0.0;
};

WedgeRegion wedge_region(std::size_t m_index, std::size_t m);

// Index of the wedge containing `point`. Wedges are half-open, so a point on
// the boundary between wedges k and k+1 belongs to k+1; the origin goes to
// wedge 0.
std::size_t decode_wedge(Complex point, std::size_t m);

// sqrt(E) * exp(2 pi i k / M), k = 0..M-1.
std::vector<Complex> psk_constellation(std::size_t m, double energy);

// Receiver-port state after mixing sender and jammer on a beam splitter of
// transmittivity eta and tracing out the other port.
ThermalState beamsplitter_output(const ThermalState& sender,
                                 const ThermalState& jammer, double eta);

// Heterodyne outcome density exp(-|alpha - x|^2 / (N+1)) / (pi (N+1)).
double heterodyne_density(const ThermalState& state, Complex point);

// Probability that the heterodyne outcome falls in `region`. The radial
// integral is done in closed form (erfc); the angular one adaptively to an
// absolute error of quad_tol. Throws QuadratureFailure if that fails.
double wedge_probability(const ThermalState& state, const WedgeRegion& region,
                         double quad_tol = kDefaultQuadTolerance);

// All M wedge probabilities of one state, i.e. one output distribution.
std::vector<double> wedge_distribution(const ThermalState& state, std::size_t m,
                                       double quad_tol = kDefaultQuadTolerance);

// X = S = Y = M channel: W(y|x,s) is the wedge-y probability of the mixed
// state of sender symbol x and jammer symbol s.
Avc build_mpsk_avc(const BosonicParams& params, std::size_t workers = 1);

struct EtaScanRow {
  double eta = 0.0;
  double f_value = 0.0;
  std::size_t lp_iterations = 0;
};

// Builds the channel and solves for F at every eta; params.eta is ignored.
std::vector<EtaScanRow> eta_scan(const BosonicParams& params,
                                 const std::vector<double>& eta_values,
                                 std::size_t workers = 1);

// Header: eta,f_value,lp_iterations
void write_eta_scan_csv(std::ostream& out, const std::vector<EtaScanRow>& rows);

nlohmann::json to_json(const BosonicParams& params);

}  // namespace avcsym::bosonic
