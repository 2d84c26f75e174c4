#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ckn/cli.hpp"

using namespace ckn;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    rows.push_back(f);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Cli, HydrogenExtremalPasses) {
  const CliRun r = run({"verify", "ckn-radial", "--n", "3", "--alpha", "0", "--beta", "0", "--gamma", "0.5", "--t", "2",
                     "--profile", "u1(0,0)"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][5], "ratio");
  EXPECT_NEAR(std::stod(rows[1][5]), 1.0, 1e-8);
}

TEST(Cli, InvalidParametersNameTheCondition) {
  const CliRun r = run({"verify", "ckn-radial", "--n", "1", "--alpha", "1", "--profile", "gauss(1)"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("n-2alpha>0"), std::string::npos) << r.err;
}

TEST(Cli, IdentitiesOnGaussian) {
  const CliRun r = run({"verify", "identities", "--n", "3", "--profile", "gauss(1)"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][7] == "true") continue;  // informational
    EXPECT_LE(std::stod(rows[i][5]), 1e-8) << rows[i][1];
  }
}

TEST(Cli, ExitCodeMatrix) {
  EXPECT_EQ(run({"hermite", "gap", "--n", "1", "--dmax", "0"}).code, 0);
  EXPECT_EQ(run({"verify", "hpw", "--n", "3", "--profile", "gauss(1)", "--tolerance", "-0.01"}).code, 1);
  EXPECT_EQ(run({"verify", "identities", "--n", "3", "--profile", "u2(3,0,-1)"}).code, 2);
  EXPECT_EQ(run({"verify", "hpw", "--profile", "gauss(", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  EXPECT_EQ(run({"hermite", "gap", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"hermite", "gap", "--n", "9"}).code, 2);
  EXPECT_EQ(run({"sharp-constant", "--n", "1", "--alpha", "1"}).code, 2);
  EXPECT_EQ(run({"verify", "hpw", "--config", "/nonexistent/file.cfg", "--profile", "gauss(1)"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, HermiteGapRows) {
  const CliRun r = run({"hermite", "gap", "--n", "1", "--dmax", "2"});
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "D", "gap", "claimed", "meets_claim"}));
  EXPECT_EQ(std::stod(rows[1][2]), 0.5);
  EXPECT_NEAR(std::stod(rows[3][2]), (3 - std::sqrt(6.0)) / 2, 1e-14);
}

TEST(Cli, CheckProductsAllAgree) {
  const CliRun r = run({"hermite", "check-products", "--imax", "8"});
  EXPECT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  EXPECT_EQ(rows.size(), 1u + 2 * 81);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), "true");
}

TEST(Cli, SharpConstantSummary) {
  const CliRun r = run({"sharp-constant", "--n", "3", "--alpha", "0", "--beta", "-2", "--gamma", "0", "--budget", "300"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  const auto& s = rows.back();
  EXPECT_EQ(s[0], "summary");
  EXPECT_EQ(s[1], "0");
  EXPECT_NEAR(std::stod(s[2]), 6.25, 1e-12);
  EXPECT_NEAR(std::stod(s[4]), 6.25, 1e-6);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) EXPECT_LE(std::stod(rows[i][2]), std::stod(rows[i][4]) + 1e-9);
}

TEST(Cli, StabilitySingleProfiles) {
  CliRun r = run({"stability", "--n", "3", "--profile", "gauss(0.5)"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  EXPECT_LE(std::abs(std::stod(rows[1][2])), 1e-9);
  EXPECT_LE(std::stod(rows[1][4]), 1e-9);
  EXPECT_LE(std::stod(rows[1][5]), 1e-9);
  r = run({"stability", "--n", "1", "--profile", "bump(2,0.5)"});
  EXPECT_EQ(r.code, 0) << r.err;
  rows = csv_rows(r.out);
  EXPECT_GT(std::stod(rows[1][8]), 0.0);
  EXPECT_EQ(rows[1][10], "true");
}

TEST(Cli, CsvAndJsonCarryIdenticalNumbers) {
  const std::vector<std::string> base{"verify", "identities", "--n", "2", "--alpha", "0.25", "--profile", "hermmod(0.2,4,0.5)",
                                      "--profile", "polygauss(1; 1,0,1)"};
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--format", "csv"});
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto rows = csv_rows(run(csv_args).out);
  const auto doc = nlohmann::json::parse(run(json_args).out);
  ASSERT_EQ(doc["rows"].size() + 1, rows.size());
  const auto& cols = rows[0];
  for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
    const auto& obj = doc["rows"][i];
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto& v = obj[cols[j]];
      if (v.is_number_float()) {
        EXPECT_EQ(v.get<double>(), std::stod(rows[i + 1][j])) << cols[j];
      } else if (v.is_boolean()) {
        EXPECT_EQ(v.get<bool>() ? "true" : "false", rows[i + 1][j]);
      } else if (v.is_string()) {
        EXPECT_EQ(v.get<std::string>(), rows[i + 1][j]);
      }
    }
  }
}

TEST(Cli, JsonRoundTripFromConfig) {
  const auto cfg = temp_file("ckn_cli_roundtrip.cfg");
  {
    std::ofstream f(cfg);
    f << "# poincare run\nn = 2\ndmax = 3\nsamples = 4\nseed = 99\nformat = json\n";
  }
  const CliRun a = run({"hermite", "poincare", "--config", cfg.string()});
  const CliRun b = run({"hermite", "poincare", "--config", cfg.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto da = nlohmann::json::parse(a.out);
  EXPECT_EQ(da, nlohmann::json::parse(b.out));
  EXPECT_EQ(da["rows"].size(), 4u);
  EXPECT_EQ(da["rows"][0]["n"], 2);
  const CliRun c = run({"hermite", "poincare", "--config", cfg.string(), "--seed", "100"});
  EXPECT_NE(da["rows"], nlohmann::json::parse(c.out)["rows"]);
  std::filesystem::remove(cfg);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto cfg = temp_file("ckn_cli_override.cfg");
  {
    std::ofstream f(cfg);
    f << "n = 1\ndmax = 2\n";
  }
  const auto rows = csv_rows(run({"hermite", "gap", "--config", cfg.string(), "--n", "2"}).out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1][0], "2");
  {
    std::ofstream f(cfg);
    f << "bogus = 1\n";
  }
  EXPECT_EQ(run({"hermite", "gap", "--config", cfg.string()}).code, 2);
  std::filesystem::remove(cfg);
}

TEST(Cli, OutFile) {
  const auto out = temp_file("ckn_cli_out.csv");
  const CliRun r = run({"hermite", "gap", "--n", "2", "--dmax", "1", "--out", out.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(csv_rows(ss.str()).size(), 3u);
  std::filesystem::remove(out);
}

TEST(Report, NonFiniteValuesAndQuoting) {
  Report rep;
  rep.command = "x";
  rep.table.columns = {"name", "v"};
  rep.table.add({std::string("a,\"b\""), std::numeric_limits<double>::infinity()});
  rep.table.add({std::string("c"), 0.1});
  std::ostringstream csv, js;
  rep.write(csv, "csv");
  rep.write(js, "json");
  const auto rows = csv_rows(csv.str());
  EXPECT_EQ(rows[1][0], "a,\"b\"");
  EXPECT_EQ(rows[1][1], "inf");
  EXPECT_EQ(std::stod(rows[2][1]), 0.1);
  const auto doc = nlohmann::json::parse(js.str());
  EXPECT_EQ(doc["rows"][0]["v"], "inf");
  EXPECT_THROW(rep.table.add({std::string("only one")}), Error);
}
