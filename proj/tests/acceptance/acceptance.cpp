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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "avcsym/bosonic.hpp"
#include "avcsym/cli.hpp"
#include "avcsym/discretization.hpp"
#include "avcsym/random_experiments.hpp"
#include "avcsym/symmetrizability.hpp"
#include "test_support.hpp"

namespace {

using namespace avcsym;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bosonic::BosonicParams standard_params(double eta) {
  bosonic::BosonicParams p;
  p.m = 6;
  p.energy = 16.0;
  p.noise_sender = 1.0;
  p.noise_jammer = 1.0;
  p.eta = eta;
  return p;
}

void c1(Verdict& v) {
  const double a = f_value(testing::symmetric_channel()).f_value;
  const double b = f_value(testing::x_independent_channel()).f_value;
  v.detail << "symmetric F=" << a << " x-independent F=" << b;
  v.require(a <= 1e-8, "symmetric channel F <= 1e-8");
  v.require(b <= 1e-8, "x-independent channel F <= 1e-8");
}

void c2(Verdict& v) {
  const Avc avc = testing::s_independent_channel();
  const double f = f_value(avc).f_value;
  const bool at15 = *is_epsilon_symmetrizable(avc, 1.5).is_eps_symmetrizable;
  const bool at17 = *is_epsilon_symmetrizable(avc, 1.7).is_eps_symmetrizable;
  v.detail << "F=" << f << " sym(1.5)=" << at15 << " sym(1.7)=" << at17;
  v.require(std::abs(f - 1.6) <= 1e-6, "F = 1.6 +- 1e-6");
  v.require(!at15, "not symmetrizable at 1.5");
  v.require(at17, "symmetrizable at 1.7");
}

void c3(Verdict& v) {
  double worst_gap = 0.0, worst_under = 0.0;
  std::size_t checked = 0;
  for (std::size_t s : {2u, 3u}) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const Avc avc = testing::random_avc(2, s, 2, 2026, i);
      const double f = f_value(avc).f_value;
      const auto bf = brute_force_f(avc, 0.01);
      const double gap = std::abs(f - bf.value);
      worst_gap = std::max(worst_gap, gap / (bf.lipschitz_bound * 0.01));
      worst_under = std::max(worst_under, f - bf.value);
      v.require(gap <= bf.lipschitz_bound * 0.01, "|F - brute force| <= L*0.01");
      v.require(bf.value >= f - 1e-6, "brute force >= F - 1e-6");
      ++checked;
    }
  }
  v.detail << checked << " channels, max |F-bf|/(L*res)=" << worst_gap
           << " max undercut=" << worst_under;
}

void c4(Verdict& v) {
  experiments::ScanConfig cfg;
  for (std::size_t s = 2; s <= 14; ++s) cfg.s_values.push_back(s);
  cfg.eps_values = {std::ldexp(1.0, -15), std::ldexp(1.0, -10), std::ldexp(1.0, -9),
                    std::ldexp(1.0, -3)};
  cfg.samples_per_cell = 500;
  cfg.seed = 1;
  const auto cells = experiments::psym_surface(cfg);
  auto cell = [&](std::size_t s, std::size_t e) -> const experiments::ScanCell& {
    return cells[(s - 2) * cfg.eps_values.size() + e];
  };
  v.detail << "fraction at eps=2^-10:";
  for (std::size_t s = 2; s <= 14; ++s) {
    const double p = cell(s, 1).fraction_symmetrizable;
    v.detail << ' ' << s << ':' << p;
    if (s <= 6) v.require(p == 0.0, "fraction 0 at S=" + std::to_string(s));
    if (s >= 10) v.require(p > 0.0, "fraction > 0 at S=" + std::to_string(s));
  }
  for (std::size_t s = 2; s <= 14; ++s) {
    const std::size_t idx[3] = {0, 2, 3};
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a + 1; b < 3; ++b) {
        const auto& ca = cell(s, idx[a]);
        const auto& cb = cell(s, idx[b]);
        const double band = 2.0 * std::hypot(ca.standard_error(), cb.standard_error());
        const double diff = std::abs(ca.fraction_symmetrizable - cb.fraction_symmetrizable);
        if (diff > band) {
          std::ostringstream os;
          os << "S=" << s << " eps " << ca.epsilon << " vs " << cb.epsilon << ": "
             << ca.fraction_symmetrizable << " vs " << cb.fraction_symmetrizable
             << " (2SE " << band << ")";
          v.require(false, os.str());
        }
      }
    }
  }
}

std::vector<Avc> c5_channels;

void c5(Verdict& v) {
  const double etas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  v.detail << "F(eta):";
  for (double eta : etas) {
    c5_channels.push_back(bosonic::build_mpsk_avc(standard_params(eta)));
    const double f = f_value(c5_channels.back()).f_value;
    v.detail << ' ' << eta << ':' << f;
    if (eta == 0.0 || eta == 0.5) {
      v.require(f <= 1e-6, "F <= 1e-6 at eta " + std::to_string(eta));
    } else {
      v.require(f >= 0.01, "F >= 0.01 at eta " + std::to_string(eta));
    }
  }
}

void c6(Verdict& v) {
  double worst_row = 0.0;
  for (double eta = 0.0; eta <= 1.0 + 1e-12; eta += 0.05) {
    c5_channels.push_back(bosonic::build_mpsk_avc(standard_params(std::min(eta, 1.0))));
  }
  for (const Avc& avc : c5_channels) {
    for (std::size_t x = 0; x < avc.x_size(); ++x)
      for (std::size_t s = 0; s < avc.s_size(); ++s) {
        double total = 0.0;
        for (double w : avc.row(x, s)) total += w;
        worst_row = std::max(worst_row, std::abs(total - 1.0));
      }
  }
  v.require(worst_row <= 6e-9, "row sums within 6e-9");

  std::mt19937_64 pick(6);
  double worst_z = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double eta = 0.1 * static_cast<double>(pick() % 11);
    const std::size_t x = pick() % 6, s = pick() % 6, y = pick() % 6;
    const auto p = standard_params(eta);
    const auto c = bosonic::psk_constellation(6, 16.0);
    const auto st = bosonic::beamsplitter_output({c[x], 1.0}, {c[s], 1.0}, eta);
    const double q = bosonic::wedge_probability(st, bosonic::wedge_region(y, 6), p.quad_tol);

    std::mt19937_64 rng(1000 + k);
    std::normal_distribution<double> g(0.0, std::sqrt((st.noise + 1.0) / 2.0));
    const std::size_t n = 10'000'000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      hits += bosonic::decode_wedge(st.displacement + bosonic::Complex(g(rng), g(rng)), 6) == y;
    }
    const double mc = static_cast<double>(hits) / static_cast<double>(n);
    const double se = std::max(std::sqrt(mc * (1.0 - mc) / static_cast<double>(n)),
                               1.0 / static_cast<double>(n));
    const double z = std::abs(q - mc) / se;
    worst_z = std::max(worst_z, z);
    v.require(z <= 3.0, "Monte-Carlo agreement within 3 SE");
  }
  v.detail << c5_channels.size() << " channels, max |row sum - 1|=" << worst_row
           << "; 10 spot entries, max |quad-MC|/SE=" << worst_z;
}

void c7(Verdict& v) {
  const auto rows =
      discretization::convergence_scan(standard_params(0.7), 16.0, {2.0, 1.0, 0.5, 0.25});
  v.detail << "delta:S:F";
  for (const auto& r : rows) {
    v.detail << ' ' << r.delta << ':' << r.s_delta << ':' << r.f_value;
    const double nominal = 4.0 * 16.0 / (r.delta * r.delta);
    const double ratio = static_cast<double>(r.s_delta) / nominal;
    v.require(ratio <= 2.0 && ratio >= 0.5, "grid count within 2x of 4E_S/delta^2");
  }
  double previous = INFINITY;
  v.detail << "; diffs";
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double d = std::abs(rows[i].f_value - rows[i + 1].f_value);
    v.detail << ' ' << d;
    v.require(d < previous, "differences strictly decreasing");
    previous = d;
  }
}

void c8(Verdict& v) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const std::size_t X = 2 + rng() % 5, S = 2 + rng() % 9, Y = 2 + rng() % 5;
    const Avc avc = testing::random_avc(X, S, Y, 8, k);
    const auto lp = build_epsilon_sym_lp(avc, 0.01);
    const std::size_t pairs = X * (X - 1) / 2;
    std::size_t bounds = 0, lin = 0, budget = 0;
    for (std::size_t j = 0; j < X * S; ++j) bounds += lp.lower_bound(j) == 0.0;
    for (std::size_t r = 0; r < lp.num_ineq(); ++r) {
      bool touches_u = false;
      for (std::size_t j = 0; j < X * S; ++j) touches_u |= lp.ineq_matrix(r, j) != 0.0;
      (touches_u ? lin : budget) += 1;
    }
    const std::size_t m = lp.num_eq() + bounds + lin + budget;
    const bool ok = lp.num_variables() == X * S + pairs * Y && lp.num_eq() == X &&
                    bounds == X * S && lin == 2 * pairs * Y && budget == pairs &&
                    m == X + X * S + 2 * pairs * Y + pairs &&
                    runtime_estimate(avc, 0.01).m == m && runtime_estimate(avc, 0.01).n == lp.num_variables();
    v.require(ok, "counts for X=" + std::to_string(X) + " S=" + std::to_string(S) +
                      " Y=" + std::to_string(Y));
  }

  const double eps = std::ldexp(1.0, -10);
  const std::size_t sizes[] = {4, 8, 16, 32};
  std::vector<double> times, predicted;
  for (std::size_t s : sizes) {
    std::vector<Avc> batch;
    for (std::uint64_t i = 0; i < 40; ++i) batch.push_back(testing::random_avc(4, s, 4, 88, i));
    double best = INFINITY;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      for (const Avc& avc : batch) (void)lp::solve_lp(build_epsilon_sym_lp(avc, eps));
      best = std::min(best, seconds_since(t0));
    }
    times.push_back(best);
    predicted.push_back(runtime_estimate(batch.front(), eps).predicted_order);
  }
  v.detail << "counts for 20 shapes; time ratio vs predicted:";
  for (std::size_t i = 1; i < 4; ++i) {
    const double measured = times[i] / times[0];
    const double model = predicted[i] / predicted[0];
    v.detail << " S=" << sizes[i] << ' ' << measured << '/' << model;
    v.require(measured <= 3.0 * model, "time growth within 3x of predicted at S=" +
                                           std::to_string(sizes[i]));
  }
}

void c9(Verdict& v) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("avcsym_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const std::vector<std::vector<std::string>> scans = {
      {"random-scan", "--s", "2:14:3", "--eps-exp=-15:-3:6", "--samples", "200", "--seed", "9"},
      {"bosonic-scan", "--eta", "0:1:0.1"},
      {"discretize-scan", "--eta", "0.7", "--delta", "2:0.5:halving", "--no-timings"}};
  for (const auto& scan : scans) {
    std::string first;
    for (const char* workers : {"1", "4"}) {
      auto args = scan;
      const fs::path out = dir / (scan[0] + "_" + workers + ".csv");
      args.insert(args.end(), {"--workers", workers, "--out", out.string()});
      std::ostringstream o, e;
      const int code = cli::run_cli(args, o, e);
      v.require(code == 0, scan[0] + " exit code " + std::to_string(code) + " " + e.str());
      const std::string body = slurp(out);
      v.require(!body.empty(), scan[0] + " wrote output");
      if (first.empty()) {
        first = body;
      } else {
        v.require(body == first, scan[0] + " byte-identical across worker counts");
      }
    }
    v.detail << scan[0] << " ok; ";
  }
  fs::remove_all(dir);
}

struct Criterion {
  int number;
  const char* title;
  double budget_seconds;
  std::function<void(Verdict&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "symmetry-forced zeros", 1.0, c1},
      {2, "analytic nonzero", 1.0, c2},
      {3, "brute-force oracle equivalence", 300.0, c3},
      {4, "random channel threshold", 1800.0, c4},
      {5, "bosonic eta zeros", 600.0, c5},
      {6, "quadrature soundness", 600.0, c6},
      {7, "discretization convergence", 1800.0, c7},
      {8, "LP size law", 600.0, c8},
      {9, "determinism across workers", 1800.0, c9},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(t0);
    v.require(elapsed < c.budget_seconds, "runtime budget " + std::to_string(c.budget_seconds) + " s");
    all &= v.pass;
    std::printf("%s criterion %d (%s): %.2fs; %s\n", v.pass ? "PASS" : "FAIL", c.number, c.title,
                elapsed, v.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
