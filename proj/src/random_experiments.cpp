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

#include "avcsym/random_experiments.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "avcsym/error.hpp"
#include "avcsym/format.hpp"
#include "avcsym/parallel.hpp"
#include "avcsym/symmetrizability.hpp"

namespace avcsym::experiments {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Engine derive_stream(std::uint64_t seed, std::uint64_t cell, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ cell);
  h = splitmix64(h ^ index);
  return Engine(h);
}

std::uint64_t cell_key(std::size_t x_size, std::size_t s_size, std::size_t y_size) {
  std::uint64_t h = splitmix64(x_size);
  h = splitmix64(h ^ s_size);
  return splitmix64(h ^ y_size);
}

double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

Avc sample_avc(std::size_t x_size, std::size_t s_size, std::size_t y_size,
               Engine& engine) {
  if (x_size == 0 || s_size == 0 || y_size == 0) {
    throw InvalidArgument("alphabet sizes must be positive");
  }
  std::vector<double> w(x_size * s_size * y_size);
  for (std::size_t row = 0; row < x_size * s_size; ++row) {
    double* r = &w[row * y_size];
    double sum = 0.0;
    for (std::size_t y = 0; y < y_size; ++y) {
      // -log(1 - u) with u in [0,1) is a standard exponential and never inf.
      r[y] = -std::log1p(-uniform01(engine));
      sum += r[y];
    }
    if (sum == 0.0) {
      // All draws exactly zero (probability ~2^-53Y); fall back to uniform.
      for (std::size_t y = 0; y < y_size; ++y) r[y] = 1.0 / static_cast<double>(y_size);
    } else {
      for (std::size_t y = 0; y < y_size; ++y) r[y] /= sum;
    }
  }
  return validate_avc(w, x_size, s_size, y_size);
}

std::size_t dof_threshold(std::size_t x_size, std::size_t y_size) {
  if (x_size < 2) throw AlphabetTooSmall("dof_threshold needs X >= 2");
  const std::size_t twice = (x_size - 1) * y_size;
  return (twice + 1) / 2 + 1;
}

void ScanConfig::validate() const {
  if (x_size < 2 || y_size < 2) throw InvalidArgument("X and Y must be >= 2");
  if (samples_per_cell < 1) throw InvalidArgument("samples_per_cell must be >= 1");
  if (s_values.empty()) throw InvalidArgument("no jammer alphabet sizes given");
  if (eps_values.empty()) throw InvalidArgument("no epsilon values given");
  for (std::size_t s : s_values) {
    if (s < 2) throw InvalidArgument("jammer alphabet sizes must be >= 2");
  }
  for (double e : eps_values) {
    if (!(e > 0.0)) throw InvalidArgument("epsilon values must be > 0");
  }
}

double ScanCell::standard_error() const {
  if (samples == 0) return 0.0;
  const double p = fraction_symmetrizable;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

std::vector<double> sample_f_values(std::size_t x_size, std::size_t y_size,
                                    std::size_t s_size, std::size_t samples,
                                    std::uint64_t seed, std::size_t workers) {
  const std::uint64_t cell = cell_key(x_size, s_size, y_size);
  std::vector<double> f(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    Engine engine = derive_stream(seed, cell, i);
    const Avc avc = sample_avc(x_size, s_size, y_size, engine);
    try {
      f[i] = f_value(avc).f_value;
    } catch (const Error& e) {
      std::ostringstream os;
      os << "sample " << i << " of cell X=" << x_size << " S=" << s_size
         << " Y=" << y_size << " seed=" << seed << ": " << e.what();
      throw NumericalBreakdown(os.str());
    }
  });
  return f;
}

namespace {

ScanCell summarize(std::size_t s, double epsilon, const std::vector<double>& f) {
  ScanCell cell;
  cell.s = s;
  cell.epsilon = epsilon;
  cell.samples = f.size();
  std::size_t hits = 0;
  double total = 0.0;
  for (double v : f) {
    if (v <= epsilon + kDecisionSlack) ++hits;
    total += v;
  }
  cell.fraction_symmetrizable = static_cast<double>(hits) / static_cast<double>(f.size());
  cell.mean_f = total / static_cast<double>(f.size());
  return cell;
}

}  // namespace

ScanCell estimate_psym(std::size_t x_size, std::size_t y_size, std::size_t s_size,
                       double epsilon, std::size_t samples, std::uint64_t seed,
                       std::size_t workers) {
  ScanConfig config{x_size, y_size, {s_size}, {epsilon}, samples, seed};
  config.validate();
  return summarize(s_size, epsilon,
                   sample_f_values(x_size, y_size, s_size, samples, seed, workers));
}

std::vector<ScanCell> psym_surface(const ScanConfig& config, std::size_t workers) {
  config.validate();
  std::vector<ScanCell> cells;
  cells.reserve(config.s_values.size() * config.eps_values.size());
  for (std::size_t s : config.s_values) {
    const auto f = sample_f_values(config.x_size, config.y_size, s,
                                   config.samples_per_cell, config.seed, workers);
    for (double eps : config.eps_values) cells.push_back(summarize(s, eps, f));
  }
  return cells;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanCell>& cells,
                    std::uint64_t seed) {
  out << "s,epsilon,fraction,mean_f,samples,seed\n";
  for (const auto& c : cells) {
    out << c.s << ',' << format_number(c.epsilon) << ','
        << format_number(c.fraction_symmetrizable) << ',' << format_number(c.mean_f)
        << ',' << c.samples << ',' << seed << '\n';
  }
}

nlohmann::json scan_metadata(const ScanConfig& config,
                             const std::vector<ScanCell>& cells) {
  nlohmann::json cell_stats = nlohmann::json::array();
  for (const auto& c : cells) {
    cell_stats.push_back({{"s", c.s},
                          {"epsilon", c.epsilon},
                          {"fraction", c.fraction_symmetrizable},
                          {"standard_error", c.standard_error()}});
  }
  return {{"x", config.x_size},
          {"y", config.y_size},
          {"s_values", config.s_values},
          {"eps_values", config.eps_values},
          {"samples_per_cell", config.samples_per_cell},
          {"seed", config.seed},
          {"distribution", kSamplingDistribution},
          {"stream_derivation", "splitmix64(seed, cell(X,S,Y), sample index) -> mt19937_64"},
          {"decision_slack", kDecisionSlack},
          {"cells", std::move(cell_stats)}};
}

}  // namespace avcsym::experiments
