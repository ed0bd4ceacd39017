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
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "avcsym/avc.hpp"
#include "json.hpp"

namespace avcsym::experiments {

// Name recorded in scan metadata for the channel distribution.
inline constexpr const char* kSamplingDistribution =
    "flat-dirichlet (independent uniform row per (x,s) on the output simplex)";

using Engine = std::mt19937_64;

// Independent stream for sample `index` of cell `cell` under `seed`. Streams
// are derived by SplitMix64 hashing, so any (seed, cell, index) triple can be
// reproduced without replaying other samples.
Engine derive_stream(std::uint64_t seed, std::uint64_t cell, std::uint64_t index);

// Cell key of the channel population with the given alphabet sizes.
std::uint64_t cell_key(std::size_t x_size, std::size_t s_size, std::size_t y_size);

// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
double uniform01(Engine& engine);

// Every row W(.|x,s) drawn independently and uniformly from the Y-simplex
// (normalized standard exponentials).
Avc sample_avc(std::size_t x_size, std::size_t s_size, std::size_t y_size,
               Engine& engine);

// Smallest S with S - 1 >= (X - 1) Y / 2, i.e. ceil((X-1)Y/2) + 1.
std::size_t dof_threshold(std::size_t x_size, std::size_t y_size);

struct ScanConfig {
  std::size_t x_size = 4;
  std::size_t y_size = 4;
  std::vector<std::size_t> s_values;
  std::vector<double> eps_values;
  std::size_t samples_per_cell = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ScanCell {
  std::size_t s = 0;
  double epsilon = 0.0;
  double fraction_symmetrizable = 0.0;
  std::size_t samples = 0;
  double mean_f = 0.0;

  // Binomial standard error of the fraction, sqrt(p(1-p)/n).
  double standard_error() const;
};

// F values of `samples` channels of the (X, S, Y) population, sample i drawn
// from derive_stream(seed, cell_key(X, S, Y), i).
std::vector<double> sample_f_values(std::size_t x_size, std::size_t y_size,
                                    std::size_t s_size, std::size_t samples,
                                    std::uint64_t seed, std::size_t workers = 1);

ScanCell estimate_psym(std::size_t x_size, std::size_t y_size, std::size_t s_size,
                       double epsilon, std::size_t samples, std::uint64_t seed,
                       std::size_t workers = 1);

// One cell per (s, epsilon), s-major. For a fixed S every epsilon sees the
// same channel sample, so F is solved once per channel.
std::vector<ScanCell> psym_surface(const ScanConfig& config, std::size_t workers = 1);

// Header: s,epsilon,fraction,mean_f,samples,seed
void write_scan_csv(std::ostream& out, const std::vector<ScanCell>& cells,
                    std::uint64_t seed);

nlohmann::json scan_metadata(const ScanConfig& config,
                             const std::vector<ScanCell>& cells);

}  // namespace avcsym::experiments
