#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "expfam/cli.hpp"
#include "expfam/errors.hpp"

namespace {

using expfam::cli::Record;
namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "expfam");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = expfam::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("expfam_cli_" + name);
  std::ofstream(p) << content;
  return p.string();
}

Record first(const Outcome& o) {
  const Record j = Record::parse(o.out);
  EXPECT_TRUE(j.is_array());
  EXPECT_FALSE(j.empty());
  return j.at(0);
}

// Minimal RFC 4180 reader used only to check the writer.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rows.back().push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      rows.back().push_back(field);
      field.clear();
      rows.emplace_back();
      ++i;
    } else {
      field += c;
    }
  }
  if (rows.back().empty()) rows.pop_back();
  return rows;
}

TEST(CliDensity, ExponentialAtOne) {
  const auto o = run({"density", "--family", "gamma", "--shape", "1", "--rate", "1", "--x", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(first(o)["density"].get<double>(), std::exp(-1.0), 1e-15);
}

TEST(CliDensity, PoissonExponentialAtom) {
  const auto o = run({"density", "--family", "poisson-exp", "--kappa", "2", "--rate", "1", "--x", "0"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Record r = first(o);
  EXPECT_NEAR(r["atom"].get<double>(), std::exp(-1.0), 1e-15);
  EXPECT_TRUE(r["log_density"].is_null());
}

TEST(CliDensity, OutsideSupportExitsTwo) {
  const auto o = run({"density", "--family", "gamma", "--shape", "1", "--rate", "1", "--x", "-1"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("SupportError"), std::string::npos);
  EXPECT_TRUE(o.out.empty());
}

TEST(CliDensity, GaussianTwoDimensionsByMean) {
  const auto o = run({"density", "--family", "gaussian", "--cov", "2,0,0,1", "--mean", "0,0", "--x", "0,0"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NEAR(first(o)["density"].get<double>(), 1.0 / (2.0 * M_PI * std::sqrt(2.0)), 1e-14);
}

TEST(CliInput, BadFlagsExitTwo) {
  EXPECT_EQ(run({"density", "--family", "weibull", "--rate", "1", "--x", "1"}).code, 2);
  EXPECT_EQ(run({"density", "--family", "gamma", "--rate", "1", "--theta", "-1", "--x", "1"}).code, 2);
  EXPECT_EQ(run({"density", "--family", "gamma", "--rate", "1", "--x", "1", "--tol", "0"}).code, 2);
  EXPECT_EQ(run({"density", "--format", "xml", "--rate", "1", "--x", "1"}).code, 2);
  EXPECT_EQ(run({"--unknown-flag"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliPredict, GammaCnmlSpotValueAndCompare) {
  const std::string data = temp_file("one.txt", "# prefix\n1.0\n");
  const auto o = run({"predict", "--family", "gamma", "--data", data, "--future", "1", "--method", "cnml", "--compare"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Record r = first(o);
  EXPECT_NEAR(r["log_density"].get<double>(), std::log(0.25), 1e-9);
  EXPECT_LE(r["abs_difference"].get<double>(), 1e-6);
  EXPECT_TRUE(r["within_tolerance"].get<bool>());
}

TEST(CliPredict, EmptyDataExitsTwo) {
  const std::string data = temp_file("empty.txt", "# nothing\n\n");
  EXPECT_EQ(run({"predict", "--data", data, "--future", "1"}).code, 2);
  EXPECT_EQ(run({"predict", "--data", "/nonexistent/file", "--future", "1"}).code, 2);
  const std::string bad = temp_file("bad.txt", "1.0\nabc\n");
  EXPECT_EQ(run({"predict", "--data", bad, "--future", "1"}).code, 2);
}

TEST(CliPredict, UnreachableToleranceExitsThree) {
  const std::string data = temp_file("ig.txt", "1.0\n");
  const auto o = run({"predict", "--family", "inverse-gaussian", "--data", data, "--future", "1", "--method",
                      "jeffreys", "--tol", "1e-300"});
  EXPECT_EQ(o.code, 3) << o.err;
  EXPECT_NE(o.err.find("numerical error"), std::string::npos);
}

TEST(CliInterval, GammaCredibleAndCoincidence) {
  const std::string data = temp_file("one_i.txt", "1.0\n");
  const auto o = run({"interval", "--family", "gamma", "--data", data, "--level", "0.9", "--compare"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Record r = first(o);
  EXPECT_NEAR(r["upper"].get<double>(), std::log(10.0), 1e-9);
  EXPECT_EQ(r["credible_upper"].get<double>(), r["confidence_upper"].get<double>());
  EXPECT_TRUE(r["coincide"].get<bool>());
}

TEST(CliInterval, PoissonExponentialFlagsDifference) {
  const std::string data = temp_file("two.txt", "2.0\n");
  const auto o = run({"interval", "--family", "poisson-exp", "--kappa", "2", "--data", data, "--compare"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Record r = first(o);
  EXPECT_FALSE(r["coincide"].get<bool>());
  EXPECT_GT(r["abs_difference"].get<double>(), 1e-3);
}

TEST(CliInterval, ZeroDataPolicy) {
  const std::string data = temp_file("zeros.txt", "0\n0\n");
  EXPECT_EQ(run({"interval", "--family", "poisson-exp", "--data", data}).code, 4);
  const auto o = run({"interval", "--family", "poisson-exp", "--data", data, "--zero-data", "limit"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(first(o)["degenerate"].get<bool>());
  EXPECT_EQ(run({"interval", "--family", "inverse-gaussian", "--data", data}).code, 2);
}

TEST(CliCoverage, DeterministicAcrossThreadCounts) {
  const std::vector<std::string> base{"coverage", "--family", "gamma", "--rate", "2", "--m", "5", "--trials", "20000",
                                      "--seed", "7"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one), b = run(four);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(first(a)["trials"].get<int>(), 20000);
}

TEST(CliVerify, RatioIntegralSuiteGammaPasses) {
  const auto o = run({"verify", "--suite", "lemma1", "--family", "gamma", "--shape", "1"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Record j = Record::parse(o.out);
  ASSERT_EQ(j.size(), 4u);
  for (const auto& r : j) {
    EXPECT_TRUE(r["pass"].get<bool>());
    EXPECT_LE(r["statistic"].get<double>(), r["threshold"].get<double>());
    EXPECT_TRUE(r.contains("runtime_seconds"));
    EXPECT_FALSE(r["grid"].get<std::string>().empty());
  }
}

TEST(CliVerify, FailedCheckExitsOne) {
  // An equivalence threshold below rounding noise cannot be met.
  const auto o = run({"verify", "--suite", "equivalence", "--family", "gamma", "--equivalence-tol", "1e-300"});
  EXPECT_EQ(o.code, 1);
  EXPECT_FALSE(first(o)["pass"].get<bool>());
}

TEST(CliVerify, InverseGaussianSaddlepoint) {
  const auto o = run({"verify", "--suite", "saddlepoint", "--family", "inverse-gaussian", "--kappa", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_LE(first(o)["statistic"].get<double>(), 1e-6);
}

TEST(CliVerify, ReproducibleRerunsAreByteIdentical) {
  const std::vector<std::string> args{"verify", "--suite", "saddlepoint", "--reproducible", "--format", "csv"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find("runtime"), std::string::npos);
}

TEST(CliVerify, UnknownSuiteExitsTwo) { EXPECT_EQ(run({"verify", "--suite", "everything"}).code, 2); }

TEST(CliOutput, JsonAndCsvCarryTheSameRecord) {
  const std::vector<std::string> base{"density", "--family", "gamma", "--shape", "2.5", "--rate", "0.7", "--x", "1.3"};
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--format", "csv"});
  const Record j = first(run(base));
  const auto rows = parse_csv(run(csv_args).out);
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_EQ(rows[0].size(), j.size());
  std::size_t i = 0;
  for (const auto& [key, value] : j.items()) {
    EXPECT_EQ(rows[0][i], key);
    if (value.is_string()) {
      EXPECT_EQ(rows[1][i], value.get<std::string>());
    } else {
      EXPECT_EQ(Record::parse(rows[1][i]), value);
    }
    ++i;
  }
}

TEST(CliOutput, CsvQuotesSeparators) {
  std::vector<Record> recs(1);
  recs[0]["text"] = "a,\"b\"\nc";
  recs[0]["list"] = Record::array({1, 2});
  const auto rows = parse_csv(expfam::cli::render(recs, expfam::cli::OutputFormat::Csv));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "a,\"b\"\nc");
  EXPECT_EQ(Record::parse(rows[1][1]), Record::array({1, 2}));
}

TEST(CliConfig, FlagsOverrideConfigFile) {
  const std::string cfg = temp_file("cfg.ini", "family = gamma\nshape = 3\nrate = 2\nx = 1\n");
  const auto from_file = first(run({"density", "--config", cfg}));
  EXPECT_EQ(from_file["family"].get<std::string>(), "gamma(alpha=3)");
  const auto overridden = first(run({"density", "--config", cfg, "--shape", "1"}));
  EXPECT_NEAR(overridden["density"].get<double>(), 2.0 * std::exp(-2.0), 1e-15);
}

TEST(CliConfig, ReadData) {
  const std::string two = temp_file("pairs.txt", "# x y\n1, 2\n3\t4\n\n5 6\n");
  const auto pts = expfam::cli::read_data(two, 2);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[1](1), 4.0);
  EXPECT_THROW(expfam::cli::read_data(two, 1), expfam::DomainError);
}

}  // namespace
