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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "avcsym/cli.hpp"
#include "avcsym/error.hpp"
#include "avcsym/symmetrizability.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace avcsym::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// CSV body split into rows of fields, header dropped.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("avcsym_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_channel(const std::string& name, const Avc& avc) const {
    write_avc_file(avc, file(name));
    return file(name);
  }

  fs::path dir_;
};

TEST(ParseRange, Forms) {
  EXPECT_EQ(parse_range("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(parse_range("2:6:1"), (std::vector<double>{2, 3, 4, 5, 6}));
  EXPECT_EQ(parse_range("-15:-3:6"), (std::vector<double>{-15, -9, -3}));
  EXPECT_EQ(parse_range("2:0.25:halving"), (std::vector<double>{2, 1, 0.5, 0.25}));
  EXPECT_EQ(parse_range("1:1:1"), std::vector<double>{1.0});
  EXPECT_EQ(parse_range("3:1:-1"), (std::vector<double>{3, 2, 1}));
  const auto etas = parse_range("0:1:0.02");
  ASSERT_EQ(etas.size(), 51u);
  EXPECT_EQ(etas.front(), 0.0);
  EXPECT_NEAR(etas.back(), 1.0, 1e-12);
  EXPECT_EQ(etas[25], 0.5);
}

TEST(ParseRange, Errors) {
  for (const char* bad : {"", "a", "1:2", "1:2:3:4", "1:2:0", "2:1:1", "1:x:1", "0:1:halving",
                          "1:2:halving", "0:1e9:1e-3"}) {
    EXPECT_THROW(parse_range(bad), InvalidArgument) << bad;
  }
  EXPECT_THROW(parse_count_range("1:2:0.5"), InvalidArgument);
  EXPECT_EQ(parse_count_range("2:14:4"), (std::vector<std::size_t>{2, 6, 10, 14}));
}

TEST_F(CliTest, CheckExitCodes) {
  const auto sym = write_channel("sym.json", testing::symmetric_channel());
  const auto indep = write_channel("ind.json", testing::s_independent_channel());
  EXPECT_EQ(run({"check", sym, "--epsilon", "1e-6"}).code, kExitSymmetrizable);
  const auto r = run({"check", indep, "--epsilon", "1.5"});
  EXPECT_EQ(r.code, kExitNotSymmetrizable);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["symmetrizable"], false);
  EXPECT_EQ(j["epsilon"], 1.5);
  EXPECT_EQ(run({"check", indep, "--epsilon", "1.7"}).code, kExitSymmetrizable);
  EXPECT_EQ(nlohmann::json::parse(run({"check", indep}).out)["epsilon"], kDefaultEpsilon);

  std::ofstream(file("bad.json")) << "{\"x\": 2, \"w\": [";
  const auto bad = run({"check", file("bad.json")});
  EXPECT_EQ(bad.code, kExitError);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(run({"check", file("missing.json")}).code, kExitError);
  EXPECT_EQ(run({"check", sym, "--epsilon", "0"}).code, kExitError);
}

TEST_F(CliTest, FValue) {
  const auto sym = write_channel("sym.json", testing::symmetric_channel());
  const auto indep = write_channel("ind.json", testing::s_independent_channel());
  EXPECT_LE(nlohmann::json::parse(run({"fvalue", sym}).out)["f_value"].get<double>(), 1e-8);
  EXPECT_NEAR(nlohmann::json::parse(run({"fvalue", indep}).out)["f_value"].get<double>(), 1.6,
              1e-9);

  const Avc avc = testing::random_avc(4, 6, 4, 12);
  const auto path = write_channel("rand.json", avc);
  const auto r = run({"fvalue", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["f_value"].get<double>(), f_value(avc).f_value);
}

TEST_F(CliTest, RandomScanRepeatable) {
  const std::vector<std::string> args = {"random-scan", "--s", "5:9:2", "--eps-exp=-12:-4:4",
                                         "--samples", "100", "--seed", "77"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", file("a.csv")});
  b.insert(b.end(), {"--out", file("b.csv"), "--workers", "3"});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(file("a.csv")), slurp(file("b.csv")));
  EXPECT_EQ(csv_rows(slurp(file("a.csv"))).size(), 9u);

  const auto meta = nlohmann::json::parse(slurp(file("a.csv.meta.json")));
  EXPECT_EQ(meta["seed"], 77);
  EXPECT_EQ(meta["samples_per_cell"], 100);
  EXPECT_EQ(meta["x"], 4);
  EXPECT_EQ(meta["y"], 4);
  EXPECT_EQ(meta["s_values"], (std::vector<int>{5, 7, 9}));
  EXPECT_EQ(meta["eps_exponents"], (std::vector<double>{-12, -8, -4}));
  EXPECT_EQ(meta["command"], "random-scan");
}

// Below the threshold S = 7 no channel should be symmetrizable anywhere in
// the default epsilon sweep.
TEST_F(CliTest, RandomScanBelowThresholdAllZero) {
  const auto r = run({"random-scan", "--s", "2:6:1", "--samples", "500"});
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u * 13u);
  for (const auto& row : rows) {
    EXPECT_EQ(std::stod(row[2]), 0.0) << "S = " << row[0] << " eps = " << row[1];
  }
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  const std::vector<std::string> args = {"random-scan", "--s", "7", "--eps-exp=-3",
                                         "--samples", "40"};
  ::unsetenv("AVCSYM_SEED");
  const auto unset = run(args);
  auto explicit_one = args;
  explicit_one.insert(explicit_one.end(), {"--seed", "1"});
  EXPECT_EQ(unset.out, run(explicit_one).out);

  ::setenv("AVCSYM_SEED", "31", 1);
  const auto env = run(args);
  ::unsetenv("AVCSYM_SEED");
  auto explicit_31 = args;
  explicit_31.insert(explicit_31.end(), {"--seed", "31"});
  EXPECT_EQ(env.out, run(explicit_31).out);
  EXPECT_NE(env.out, unset.out);

  ::setenv("AVCSYM_SEED", "abc", 1);
  EXPECT_EQ(run(args).code, kExitError);
  ::unsetenv("AVCSYM_SEED");
}

TEST_F(CliTest, RandomScanJson) {
  const auto r = run({"random-scan", "--s", "3", "--eps-exp=-10", "--samples", "5",
                      "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["s"], 3);
  EXPECT_EQ(j[0]["samples"], 5);
  EXPECT_EQ(run({"random-scan", "--format", "xml"}).code, kExitError);
}

TEST_F(CliTest, BosonicScanPoints) {
  const auto one = run({"bosonic-scan", "--eta", "1:1:1"});
  ASSERT_EQ(one.code, 0);
  const auto rows = csv_rows(one.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GE(std::stod(rows[0][1]), 1.5);
  EXPECT_EQ(run({"bosonic-scan", "--eta", "1.5"}).code, kExitError);
  EXPECT_EQ(run({"bosonic-scan", "--m", "1"}).code, kExitError);
}

TEST_F(CliTest, BosonicScanCurve) {
  ASSERT_EQ(run({"bosonic-scan", "--m", "6", "--energy", "16", "--na", "1", "--ns", "1",
                 "--eta", "0:1:0.02", "--out", file("eta.csv"), "--export-dir",
                 file("export")})
                .code,
            0);
  const auto rows = csv_rows(slurp(file("eta.csv")));
  ASSERT_EQ(rows.size(), 51u);
  for (const auto& row : rows) {
    const double eta = std::stod(row[0]);
    const double f = std::stod(row[1]);
    if (eta == 0.0 || eta == 0.5) {
      EXPECT_LE(f, 1e-6) << "eta " << eta;
    } else {
      EXPECT_GT(f, 1e-6) << "eta " << eta;
    }
  }
  const auto meta = nlohmann::json::parse(slurp(file("eta.csv.meta.json")));
  EXPECT_EQ(meta["m"], 6);
  EXPECT_EQ(meta["eta_values"].size(), 51u);
  EXPECT_EQ(meta["noise_jammer"], 1.0);
  EXPECT_FALSE(meta.contains("eta"));

  const Avc half = read_avc_file(file("export/avc_25_eta_0.5.json"));
  EXPECT_EQ(half.s_size(), 6u);
  EXPECT_LE(f_value(half).f_value, 1e-6);
  std::size_t exported = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(file("export"))) ++exported;
  EXPECT_EQ(exported, 51u);
}

TEST_F(CliTest, BosonicScanWorkers) {
  const std::vector<std::string> base = {"bosonic-scan", "--eta", "0:1:0.125"};
  auto a = base, b = base;
  b.insert(b.end(), {"--workers", "4"});
  const auto ra = run(a), rb = run(b);
  ASSERT_EQ(ra.code, 0);
  EXPECT_EQ(ra.out, rb.out);
}

TEST_F(CliTest, DiscretizeScanCauchy) {
  const auto r = run({"discretize-scan", "--eta", "0.7", "--delta", "2:0.25:halving",
                      "--no-timings", "--out", file("d.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(slurp(file("d.csv")));
  ASSERT_EQ(rows.size(), 4u);
  std::vector<double> f;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    f.push_back(std::stod(rows[i][4]));
    EXPECT_EQ(rows[i][5], "0");
    EXPECT_EQ(rows[i][6], "0");
    if (i > 0) EXPECT_GT(std::stoul(rows[i][2]), std::stoul(rows[i - 1][2]));
    EXPECT_EQ(std::stoul(rows[i][2]), 6 * std::stoul(rows[i][1]) + 90);
  }
  EXPECT_GT(std::abs(f[0] - f[1]), std::abs(f[1] - f[2]));
  EXPECT_GT(std::abs(f[1] - f[2]), std::abs(f[2] - f[3]));
  const auto meta = nlohmann::json::parse(slurp(file("d.csv.meta.json")));
  EXPECT_EQ(meta["energy_limit"], 16.0);
  EXPECT_EQ(meta["eta"], 0.7);
  EXPECT_EQ(meta["timings"], false);
}

TEST_F(CliTest, DiscretizeScanZeroTransmission) {
  const auto r = run({"discretize-scan", "--eta", "0", "--delta", "2:1:halving"});
  ASSERT_EQ(r.code, 0);
  for (const auto& row : csv_rows(r.out)) EXPECT_LE(std::stod(row[4]), 1e-6);
  EXPECT_EQ(run({"discretize-scan", "--delta", "1:2:1"}).code, kExitError);
  EXPECT_EQ(run({"discretize-scan", "--delta", "20"}).code, kExitError);
}

TEST_F(CliTest, DiscretizeScanDeterministicAcrossWorkers) {
  const std::vector<std::string> base = {"discretize-scan", "--delta", "2:1:halving",
                                         "--no-timings", "--format", "json"};
  auto b = base;
  b.insert(b.end(), {"--workers", "2"});
  const auto ra = run(base), rb = run(b);
  ASSERT_EQ(ra.code, 0);
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(nlohmann::json::parse(ra.out).size(), 2u);
}

TEST_F(CliTest, UnwritableOutputFailsBeforeCompute) {
  const auto r = run({"random-scan", "--samples", "100000000", "--out",
                      file("no/such/dir/x.csv")});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("cannot write"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsAndHelp) {
  EXPECT_EQ(run({}).code, kExitError);
  EXPECT_EQ(run({"frobnicate"}).code, kExitError);
  EXPECT_EQ(run({"check"}).code, kExitError);
  EXPECT_EQ(run({"random-scan", "--samples", "many"}).code, kExitError);
  EXPECT_EQ(run({"random-scan", "--samples", "0"}).code, kExitError);
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("random-scan"), std::string::npos);
}

}  // namespace
}  // namespace avcsym::cli
