#include <cmath>
#include <fstream>
#include <sstream>

#include "expfam/cli.hpp"
#include "expfam/errors.hpp"

namespace expfam::cli {

namespace {

double parse_real(const std::string& token, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw DomainError(where + ": '" + token + "' is not a number");
  }
  if (used != token.size()) throw DomainError(where + ": '" + token + "' is not a number");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty()) throw DomainError("empty entry in list '" + text + "'");
    out.push_back(parse_real(token, "list"));
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

Family make_family(const RunConfig& config) {
  const std::string& f = config.family;
  if (f == "gamma") return Family::gamma(config.shape);
  if (f == "inverse-gaussian") return Family::inverse_gaussian(config.kappa);
  if (f == "poisson-exp" || f == "poisson-exponential") return Family::poisson_exponential(config.kappa);
  if (f == "gaussian") {
    const std::vector<double> entries = parse_list(config.cov);
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (static_cast<std::size_t>(d * d) != entries.size()) {
      throw DomainError("--cov needs d*d entries, got " + std::to_string(entries.size()));
    }
    if (d == 1) return Family::gaussian(entries[0]);
    Matrix b(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) b(i, j) = entries[static_cast<std::size_t>(i * d + j)];
    }
    return Family::gaussian(b);
  }
  throw DomainError("unknown family '" + f + "' (expected gamma, gaussian, inverse-gaussian, poisson-exp)");
}

std::vector<Vector> read_data(const std::string& path, std::size_t dimension) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open data file '" + path + "'");
  std::vector<Vector> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line) {
      if (c == ',' || c == '\t') c = ' ';
    }
    std::istringstream ss(line);
    std::vector<double> coords;
    std::string token;
    const std::string where = path + ":" + std::to_string(line_no);
    while (ss >> token) coords.push_back(parse_real(token, where));
    if (coords.size() != dimension) {
      throw DomainError(where + ": expected " + std::to_string(dimension) + " value(s), got " +
                        std::to_string(coords.size()));
    }
    out.push_back(Eigen::Map<const Vector>(coords.data(), static_cast<Eigen::Index>(coords.size())));
  }
  if (out.empty()) throw DomainError("data file '" + path + "' holds no observations");
  return out;
}

}  // namespace expfam::cli
