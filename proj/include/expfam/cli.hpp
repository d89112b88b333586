#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "expfam/core.hpp"
#include "expfam/intervals.hpp"

namespace expfam::cli {

using Record = nlohmann::ordered_json;

enum class OutputFormat { Json, Csv };

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInputError = 2, kNumericalError = 3, kDegenerateData = 4 };

struct RunConfig {
  std::string family = "gamma";
  double shape = 1.0;
  double kappa = 2.0;
  std::string cov = "1";  // scalar, or d*d comma-separated entries in row order
  double tol = 1e-10;              // quadrature
  double root_tol = 1e-12;         // root finding
  double equivalence_tol = 1e-6;   // |log CNML - log Jeffreys| threshold
  std::uint64_t seed = 20261017;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> data_path;
  double level = 0.9;
  std::size_t m = 5;
  std::size_t trials = 100000;
  unsigned threads = 0;
  intervals::ZeroDataPolicy zero_data = intervals::ZeroDataPolicy::Reject;
  bool reproducible = false;  // drop wall-clock fields so reruns are byte-identical
};

/// Accepts gamma, gaussian, inverse-gaussian, poisson-exp / poisson-exponential.
Family make_family(const RunConfig& config);

/// Comma-separated reals.
std::vector<double> parse_list(const std::string& text);

/// One observation per line (d comma- or space-separated coordinates), blank
/// lines and lines starting with '#' skipped. DomainError on parse errors,
/// wrong dimension, or an empty file.
std::vector<Vector> read_data(const std::string& path, std::size_t dimension);

/// JSON: an array of objects. CSV: header row then one line per record;
/// nested values are written as quoted JSON.
std::string render(const std::vector<Record>& records, OutputFormat format);

struct VerificationReport {
  std::string suite;
  std::string check;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string criterion;  // "<=", ">=", "outside-band", "within-band"
  std::string grid;
  double runtime_seconds = 0.0;
};

Record to_record(const VerificationReport& report, bool with_runtime);

/// Runs one suite (lemma1, equivalence, saddlepoint, normalization, coverage,
/// all). With `family_given` the suite is restricted to the configured family;
/// otherwise it covers its built-in default families.
std::vector<VerificationReport> run_verify(const RunConfig& config, const std::string& suite, bool family_given);

/// The whole command line. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace expfam::cli
