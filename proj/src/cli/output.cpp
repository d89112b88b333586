#include <cmath>
#include <sstream>

#include "expfam/cli.hpp"

namespace expfam::cli {

namespace {

// RFC 4180: quote fields holding separators, quotes or line breaks.
std::string csv_field(const Record& value) {
  std::string text;
  if (value.is_null()) return "";
  if (value.is_string()) {
    text = value.get<std::string>();
  } else {
    text = value.dump();
  }
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string render(const std::vector<Record>& records, OutputFormat format) {
  if (format == OutputFormat::Json) {
    Record array = Record::array();
    for (const Record& r : records) array.push_back(r);
    return array.dump(2) + "\n";
  }
  std::ostringstream out;
  if (records.empty()) return "";
  std::vector<std::string> header;
  for (const auto& [key, value] : records.front().items()) header.push_back(key);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(Record(header[i]));
  out << "\r\n";
  for (const Record& r : records) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "") << (r.contains(header[i]) ? csv_field(r.at(header[i])) : "");
    }
    out << "\r\n";
  }
  return out.str();
}

Record to_record(const VerificationReport& report, bool with_runtime) {
  Record r;
  r["suite"] = report.suite;
  r["check"] = report.check;
  r["pass"] = report.pass;
  r["statistic"] = report.statistic;
  r["threshold"] = report.threshold;
  r["criterion"] = report.criterion;
  r["grid"] = report.grid;
  if (with_runtime) r["runtime_seconds"] = report.runtime_seconds;
  return r;
}

}  // namespace expfam::cli
