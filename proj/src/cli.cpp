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

#include "avcsym/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "avcsym/avc.hpp"
#include "avcsym/bosonic.hpp"
#include "avcsym/discretization.hpp"
#include "avcsym/error.hpp"
#include "avcsym/format.hpp"
#include "avcsym/random_experiments.hpp"
#include "avcsym/symmetrizability.hpp"
#include "json.hpp"

namespace avcsym::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;
constexpr std::size_t kMaxRangeLength = 1'000'000;

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw InvalidArgument("bad " + what + " '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_double(parts[0], "range value")};
  if (parts.size() != 3) {
    throw InvalidArgument("range '" + text + "' is not start:stop:step");
  }
  const double start = parse_double(parts[0], "range start");
  const double stop = parse_double(parts[1], "range stop");
  std::vector<double> values;

  if (parts[2] == "halving") {
    if (!(start > 0.0 && stop > 0.0) || stop > start) {
      throw InvalidArgument("halving range '" + text + "' needs start >= stop > 0");
    }
    for (double v = start; v >= stop * (1.0 - 1e-12); v *= 0.5) values.push_back(v);
    return values;
  }

  const double step = parse_double(parts[2], "range step");
  if (step == 0.0) throw InvalidArgument("range '" + text + "' has zero step");
  const double span = (stop - start) / step;
  if (span < -1e-9) throw InvalidArgument("range '" + text + "' is empty");
  const double count = std::floor(span + 1e-9) + 1.0;
  if (count > static_cast<double>(kMaxRangeLength)) {
    throw InvalidArgument("range '" + text + "' is too long");
  }
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    values.push_back(start + static_cast<double>(k) * step);
  }
  return values;
}

std::vector<std::size_t> parse_count_range(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_range(text)) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 0.0) {
      throw InvalidArgument("range '" + text + "' must contain whole numbers >= 0");
    }
    out.push_back(static_cast<std::size_t>(r));
  }
  return out;
}

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("AVCSYM_SEED"); env != nullptr && *env != '\0') {
    const std::string text(env);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() || text.front() == '-') {
      throw InvalidArgument("AVCSYM_SEED='" + text + "' is not an unsigned integer");
    }
    return v;
  }
  return kDefaultSeed;
}

void require_readable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
}

// Primary output: the --out file when given, else `fallback`. The file (and
// its metadata sidecar) are opened before any computation starts.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path), stream_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw InvalidArgument("cannot write '" + path + "'");
    meta_.open(path + ".meta.json", std::ios::binary | std::ios::trunc);
    if (!meta_) throw InvalidArgument("cannot write '" + path + ".meta.json'");
    stream_ = &file_;
  }

  std::ostream& stream() { return *stream_; }

  void finish(const nlohmann::json& metadata) {
    if (path_.empty()) return;
    meta_ << metadata.dump(2) << '\n';
    file_.close();
    meta_.close();
    if (file_.fail() || meta_.fail()) throw InvalidArgument("error writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ostream* stream_;
  std::ofstream file_;
  std::ofstream meta_;
};

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw InvalidArgument("format must be csv or json, got '" + format + "'");
  }
}

struct CheckOptions {
  std::string input;
  double epsilon = kDefaultEpsilon;
};

int cmd_check(const CheckOptions& o, std::ostream& out) {
  require_readable(o.input);
  if (!(o.epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  const Avc avc = read_avc_file(o.input);
  const SymResult r = is_epsilon_symmetrizable(avc, o.epsilon);
  out << to_json(r).dump(2) << '\n';
  return r.is_eps_symmetrizable.value_or(false) ? kExitSymmetrizable
                                                : kExitNotSymmetrizable;
}

int cmd_fvalue(const std::string& input, std::ostream& out) {
  require_readable(input);
  const Avc avc = read_avc_file(input);
  out << to_json(f_value(avc)).dump(2) << '\n';
  return 0;
}

struct RandomScanOptions {
  std::size_t x = 4, y = 4;
  std::string s_range = "2:14:1";
  std::string eps_exp_range = "-15:-3:1";
  std::size_t samples = 10000;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::string out_path;
  std::string format = "csv";
};

int cmd_random_scan(const RandomScanOptions& o, std::ostream& out) {
  check_format(o.format);
  experiments::ScanConfig config;
  config.x_size = o.x;
  config.y_size = o.y;
  config.s_values = parse_count_range(o.s_range);
  for (double e : parse_range(o.eps_exp_range)) config.eps_values.push_back(std::exp2(e));
  config.samples_per_cell = o.samples;
  config.seed = resolve_seed(o.seed);
  config.validate();

  Output sink(o.out_path, out);
  const auto cells = experiments::psym_surface(config, o.workers);
  if (o.format == "csv") {
    experiments::write_scan_csv(sink.stream(), cells, config.seed);
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : cells) {
      rows.push_back({{"s", c.s},
                      {"epsilon", c.epsilon},
                      {"fraction", c.fraction_symmetrizable},
                      {"mean_f", c.mean_f},
                      {"samples", c.samples},
                      {"seed", config.seed}});
    }
    sink.stream() << rows.dump(2) << '\n';
  }
  nlohmann::json meta = experiments::scan_metadata(config, cells);
  meta["command"] = "random-scan";
  meta["eps_exponents"] = parse_range(o.eps_exp_range);
  sink.finish(meta);
  return 0;
}

struct BosonicOptions {
  bosonic::BosonicParams params;
  std::string eta_range = "0:1:0.02";
  std::size_t workers = 1;
  std::string out_path;
  std::string export_dir;
  std::string format = "csv";
};

std::string eta_file_name(std::size_t index, double eta) {
  return "avc_" + std::to_string(index) + "_eta_" + format_number(eta) + ".json";
}

int cmd_bosonic_scan(const BosonicOptions& o, std::ostream& out) {
  check_format(o.format);
  const auto etas = parse_range(o.eta_range);
  bosonic::BosonicParams check = o.params;
  for (double eta : etas) {
    check.eta = eta;
    check.validate();
  }
  if (!o.export_dir.empty()) {
    std::filesystem::create_directories(o.export_dir);
    if (!std::filesystem::is_directory(o.export_dir)) {
      throw InvalidArgument("cannot use export directory '" + o.export_dir + "'");
    }
  }

  Output sink(o.out_path, out);
  const auto rows = bosonic::eta_scan(o.params, etas, o.workers);
  if (o.format == "csv") {
    bosonic::write_eta_scan_csv(sink.stream(), rows);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      arr.push_back({{"eta", r.eta}, {"f_value", r.f_value}, {"lp_iterations", r.lp_iterations}});
    }
    sink.stream() << arr.dump(2) << '\n';
  }
  if (!o.export_dir.empty()) {
    for (std::size_t i = 0; i < etas.size(); ++i) {
      bosonic::BosonicParams p = o.params;
      p.eta = etas[i];
      write_avc_file(bosonic::build_mpsk_avc(p, o.workers),
                     (std::filesystem::path(o.export_dir) / eta_file_name(i, etas[i])).string());
    }
  }
  nlohmann::json meta = bosonic::to_json(o.params);
  meta.erase("eta");
  meta["command"] = "bosonic-scan";
  meta["eta_values"] = etas;
  sink.finish(meta);
  return 0;
}

struct DiscretizeOptions {
  bosonic::BosonicParams params;
  double energy_limit = 16.0;
  std::string delta_range = "2:0.25:halving";
  std::size_t workers = 1;
  std::string out_path;
  bool no_timings = false;
  std::string format = "csv";
};

int cmd_discretize_scan(const DiscretizeOptions& o, std::ostream& out) {
  check_format(o.format);
  o.params.validate();
  const auto deltas = parse_range(o.delta_range);
  for (double d : deltas) discretization::GridSpec{o.energy_limit, d}.validate();

  Output sink(o.out_path, out);
  const auto rows = discretization::convergence_scan(o.params, o.energy_limit, deltas, o.workers);
  if (o.format == "csv") {
    discretization::write_convergence_csv(sink.stream(), rows, !o.no_timings);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      arr.push_back({{"delta", r.delta},
                     {"s_delta", r.s_delta},
                     {"lp_n", r.lp_n},
                     {"lp_m", r.lp_m},
                     {"f_value", r.f_value},
                     {"build_seconds", o.no_timings ? 0.0 : r.build_seconds},
                     {"solve_seconds", o.no_timings ? 0.0 : r.solve_seconds}});
    }
    sink.stream() << arr.dump(2) << '\n';
  }
  nlohmann::json meta = bosonic::to_json(o.params);
  meta["command"] = "discretize-scan";
  meta["energy_limit"] = o.energy_limit;
  meta["delta_values"] = deltas;
  meta["timings"] = !o.no_timings;
  sink.finish(meta);
  return 0;
}

void add_bosonic_flags(CLI::App& cmd, bosonic::BosonicParams& p) {
  cmd.add_option("--m", p.m, "constellation size M")->capture_default_str();
  cmd.add_option("--energy", p.energy, "sender and jammer energy E")->capture_default_str();
  cmd.add_option("--na", p.noise_sender, "sender thermal noise N_A")->capture_default_str();
  cmd.add_option("--ns", p.noise_jammer, "jammer thermal noise N_S")->capture_default_str();
  cmd.add_option("--quad-tol", p.quad_tol, "absolute wedge quadrature tolerance")
      ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetrizability of arbitrarily varying channels", "avcsym"};
  app.require_subcommand(1);

  CheckOptions check_opts;
  auto* check = app.add_subcommand("check", "decide epsilon-symmetrizability of a channel file");
  check->add_option("input", check_opts.input, "channel JSON file")->required();
  check->add_option("--epsilon", check_opts.epsilon, "threshold (default 2^-10)")
      ->capture_default_str();

  std::string fvalue_input;
  auto* fvalue = app.add_subcommand("fvalue", "symmetrization defect F of a channel file");
  fvalue->add_option("input", fvalue_input, "channel JSON file")->required();

  RandomScanOptions rs;
  auto* random = app.add_subcommand("random-scan", "fraction of symmetrizable random channels");
  random->add_option("--x", rs.x, "input alphabet size")->capture_default_str();
  random->add_option("--y", rs.y, "output alphabet size")->capture_default_str();
  random->add_option("--s", rs.s_range, "jammer alphabet sizes start:stop:step")
      ->capture_default_str();
  random->add_option("--eps-exp", rs.eps_exp_range, "epsilon exponents (epsilon = 2^e)")
      ->capture_default_str();
  random->add_option("--samples", rs.samples, "channels per cell")->capture_default_str();
  random->add_option("--seed", rs.seed, "seed (fallback: AVCSYM_SEED, then 1)");
  random->add_option("--workers", rs.workers, "worker threads")->capture_default_str();
  random->add_option("--out", rs.out_path, "output file (default: standard output)");
  random->add_option("--format", rs.format, "csv or json")->capture_default_str();

  BosonicOptions bs;
  auto* boson = app.add_subcommand("bosonic-scan", "F of the M-PSK jamming channel over eta");
  add_bosonic_flags(*boson, bs.params);
  boson->add_option("--eta", bs.eta_range, "transmittivities start:stop:step")
      ->capture_default_str();
  boson->add_option("--workers", bs.workers, "worker threads")->capture_default_str();
  boson->add_option("--out", bs.out_path, "output file (default: standard output)");
  boson->add_option("--export-dir", bs.export_dir, "write each channel as JSON here");
  boson->add_option("--format", bs.format, "csv or json")->capture_default_str();

  DiscretizeOptions ds;
  auto* disc = app.add_subcommand("discretize-scan",
                                  "F of grid-discretized continuous jammers over the pitch");
  add_bosonic_flags(*disc, ds.params);
  disc->add_option("--es", ds.energy_limit, "jammer energy limit E_S")->capture_default_str();
  disc->add_option("--eta", ds.params.eta, "transmittivity")->capture_default_str();
  disc->add_option("--delta", ds.delta_range, "pitches start:stop:step or start:stop:halving")
      ->capture_default_str();
  disc->add_option("--workers", ds.workers, "worker threads")->capture_default_str();
  disc->add_option("--out", ds.out_path, "output file (default: standard output)");
  disc->add_flag("--no-timings", ds.no_timings, "write 0 in the timing columns");
  disc->add_option("--format", ds.format, "csv or json")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "avcsym: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*check) return cmd_check(check_opts, out);
    if (*fvalue) return cmd_fvalue(fvalue_input, out);
    if (*random) return cmd_random_scan(rs, out);
    if (*boson) return cmd_bosonic_scan(bs, out);
    if (*disc) return cmd_discretize_scan(ds, out);
  } catch (const std::exception& e) {
    err << "avcsym: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace avcsym::cli
