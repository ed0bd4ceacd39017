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

#include "avcsym/avc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "avcsym/error.hpp"

namespace avcsym {

namespace {

std::string index_string(std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << "(" << a << "," << b << ")";
  return os.str();
}

}  // namespace

Avc validate_avc(std::span<const double> raw, std::size_t x_size,
                 std::size_t s_size, std::size_t y_size, double tolerance) {
  if (x_size == 0 || s_size == 0 || y_size == 0) {
    throw ShapeMismatch("alphabet sizes must be positive");
  }
  if (raw.size() != x_size * s_size * y_size) {
    std::ostringstream os;
    os << "expected " << x_size * s_size * y_size << " entries for "
       << x_size << "x" << s_size << "x" << y_size << ", got " << raw.size();
    throw ShapeMismatch(os.str());
  }
  for (std::size_t x = 0; x < x_size; ++x) {
    for (std::size_t s = 0; s < s_size; ++s) {
      double sum = 0.0;
      for (std::size_t y = 0; y < y_size; ++y) {
        double v = raw[(x * s_size + s) * y_size + y];
        if (!std::isfinite(v) || v < 0.0) {
          std::ostringstream os;
          os << "W[" << x << "][" << s << "][" << y << "] = " << v;
          throw NegativeEntry(os.str());
        }
        if (v > 1.0 + tolerance) {
          std::ostringstream os;
          os << "W[" << x << "][" << s << "][" << y << "] = " << v
             << " exceeds 1";
          throw RowSumViolation(os.str());
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > tolerance) {
        std::ostringstream os;
        os << "row " << index_string(x, s) << " sums to " << sum;
        throw RowSumViolation(os.str());
      }
    }
  }
  return Avc(x_size, s_size, y_size, std::vector<double>(raw.begin(), raw.end()));
}

Avc validate_avc(const std::vector<std::vector<std::vector<double>>>& raw,
                 double tolerance) {
  if (raw.empty() || raw.front().empty() || raw.front().front().empty()) {
    throw ShapeMismatch("empty tensor");
  }
  const std::size_t xs = raw.size();
  const std::size_t ss = raw.front().size();
  const std::size_t ys = raw.front().front().size();
  std::vector<double> flat;
  flat.reserve(xs * ss * ys);
  for (std::size_t x = 0; x < xs; ++x) {
    if (raw[x].size() != ss) {
      throw ShapeMismatch("ragged jammer dimension at x=" + std::to_string(x));
    }
    for (std::size_t s = 0; s < ss; ++s) {
      if (raw[x][s].size() != ys) {
        throw ShapeMismatch("ragged output dimension at " + index_string(x, s));
      }
      flat.insert(flat.end(), raw[x][s].begin(), raw[x][s].end());
    }
  }
  return validate_avc(flat, xs, ss, ys, tolerance);
}

JammerStrategy validate_strategy(std::span<const double> raw,
                                 std::size_t x_size, std::size_t s_size,
                                 double tolerance) {
  if (x_size == 0 || s_size == 0) {
    throw ShapeMismatch("strategy sizes must be positive");
  }
  if (raw.size() != x_size * s_size) {
    throw ShapeMismatch("strategy has " + std::to_string(raw.size()) +
                        " entries, expected " +
                        std::to_string(x_size * s_size));
  }
  for (std::size_t x = 0; x < x_size; ++x) {
    double sum = 0.0;
    for (std::size_t s = 0; s < s_size; ++s) {
      double v = raw[x * s_size + s];
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "U[" << x << "][" << s << "] = " << v;
        throw NegativeEntry(os.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      std::ostringstream os;
      os << "strategy row " << x << " sums to " << sum;
      throw RowSumViolation(os.str());
    }
  }
  return JammerStrategy(x_size, s_size,
                        std::vector<double>(raw.begin(), raw.end()));
}

std::vector<std::vector<double>> JammerStrategy::to_rows() const {
  std::vector<std::vector<double>> rows(x_size_);
  for (std::size_t x = 0; x < x_size_; ++x) {
    auto r = row(x);
    rows[x].assign(r.begin(), r.end());
  }
  return rows;
}

JammerStrategy JammerStrategy::identity(std::size_t size) {
  std::vector<double> u(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) u[i * size + i] = 1.0;
  return validate_strategy(u, size, size);
}

JammerStrategy JammerStrategy::uniform(std::size_t x_size, std::size_t s_size) {
  std::vector<double> u(x_size * s_size, 1.0 / static_cast<double>(s_size));
  return validate_strategy(u, x_size, s_size);
}

DefectReport symmetrization_defect(const Avc& avc, const JammerStrategy& u) {
  if (avc.x_size() != u.x_size() || avc.s_size() != u.s_size()) {
    std::ostringstream os;
    os << "channel is " << avc.x_size() << "x" << avc.s_size()
       << " in (x,s), strategy is " << u.x_size() << "x" << u.s_size();
    throw DimensionMismatch(os.str());
  }
  if (avc.x_size() < 2) {
    throw AlphabetTooSmall("symmetrization needs at least two input symbols");
  }
  const std::size_t X = avc.x_size(), S = avc.s_size(), Y = avc.y_size();

  // mixed[x][x_hat][y] = sum_s W(y|x,s) U(s|x_hat)
  std::vector<double> mixed(X * X * Y, 0.0);
  for (std::size_t x = 0; x < X; ++x) {
    for (std::size_t xh = 0; xh < X; ++xh) {
      double* out = &mixed[(x * X + xh) * Y];
      for (std::size_t s = 0; s < S; ++s) {
        const double weight = u(xh, s);
        if (weight == 0.0) continue;
        auto w = avc.row(x, s);
        for (std::size_t y = 0; y < Y; ++y) out[y] += w[y] * weight;
      }
    }
  }

  DefectReport report;
  report.per_pair.reserve(X * (X - 1) / 2);
  for (std::size_t x = 0; x < X; ++x) {
    for (std::size_t xh = x + 1; xh < X; ++xh) {
      double d = 0.0;
      for (std::size_t y = 0; y < Y; ++y) {
        d += std::abs(mixed[(x * X + xh) * Y + y] - mixed[(xh * X + x) * Y + y]);
      }
      report.per_pair.push_back({x, xh, d});
      report.max_defect = std::max(report.max_defect, d);
    }
  }
  return report;
}

double gaussian_avc_capacity(double sender_power, double jammer_power) {
  if (!(sender_power > 0.0) || !(jammer_power > 0.0)) {
    throw NonPositivePower("E and P must be positive");
  }
  if (jammer_power >= sender_power) return 0.0;
  return 0.5 * std::log2(1.0 + sender_power / jammer_power);
}

nlohmann::json to_json(const Avc& avc) {
  nlohmann::json w = nlohmann::json::array();
  for (std::size_t x = 0; x < avc.x_size(); ++x) {
    nlohmann::json per_s = nlohmann::json::array();
    for (std::size_t s = 0; s < avc.s_size(); ++s) {
      auto r = avc.row(x, s);
      per_s.push_back(std::vector<double>(r.begin(), r.end()));
    }
    w.push_back(std::move(per_s));
  }
  return {{"x", avc.x_size()}, {"s", avc.s_size()}, {"y", avc.y_size()},
          {"w", std::move(w)}};
}

Avc avc_from_json(const nlohmann::json& j, double tolerance) {
  if (!j.is_object()) throw ShapeMismatch("AVC document must be an object");
  for (const char* key : {"x", "s", "y", "w"}) {
    if (!j.contains(key)) {
      throw ShapeMismatch(std::string("missing field \"") + key + "\"");
    }
  }
  auto declared = [&](const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw ShapeMismatch(std::string("field \"") + key +
                          "\" must be a positive integer");
    }
    return static_cast<std::size_t>(v.get<long long>());
  };
  const std::size_t xs = declared("x"), ss = declared("s"), ys = declared("y");

  std::vector<std::vector<std::vector<double>>> nested;
  try {
    nested = j.at("w").get<std::vector<std::vector<std::vector<double>>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ShapeMismatch(std::string("\"w\" is not a 3-d numeric array: ") +
                        e.what());
  }
  if (nested.size() != xs || (xs > 0 && nested.front().size() != ss) ||
      (ss > 0 && !nested.front().empty() && nested.front().front().size() != ys)) {
    throw ShapeMismatch("\"w\" does not match declared sizes x=" +
                        std::to_string(xs) + " s=" + std::to_string(ss) +
                        " y=" + std::to_string(ys));
  }
  return validate_avc(nested, tolerance);
}

Avc read_avc_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return avc_from_json(j);
}

void write_avc_file(const Avc& avc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << to_json(avc).dump() << '\n';
}

}  // namespace avcsym
