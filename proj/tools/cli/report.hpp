#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lqcp/csv.hpp"

namespace lqcp::cli {

using Json = nlohmann::ordered_json;

/// Machine-readable record of one command run.
struct RunReport {
  Json command = Json::array();
  Json config = Json::object();
  Json results = Json::object();
  Json seeds = Json::object();
  Json timing = Json::object();

  Json to_json() const;
  std::string dump() const;  // two-space indented JSON plus newline
  static RunReport from_json(const Json& j);
};

/// Rows of an array of flat objects as CSV, header from the first row's keys.
void write_rows_csv(std::ostream& out, const Json& rows);

/// CSV data file with an optional header row.
CsvMatrix load_csv_matrix(const std::string& path, HeaderMode header);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace lqcp::cli
