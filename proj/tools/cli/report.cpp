#include "cli/report.hpp"

#include <ostream>

namespace lqcp::cli {

Json RunReport::to_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config;
  j["results"] = results;
  j["seeds"] = seeds;
  j["timing"] = timing;
  return j;
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

RunReport RunReport::from_json(const Json& j) {
  RunReport r;
  r.command = j.at("command");
  r.config = j.at("config");
  r.results = j.at("results");
  r.seeds = j.at("seeds");
  r.timing = j.at("timing");
  return r;
}

namespace {

std::string cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  if (v.is_null()) return "";
  if (v.is_array() || v.is_object()) return cell(Json(v.dump()));
  return v.dump();
}

}  // namespace

void write_rows_csv(std::ostream& out, const Json& rows) {
  if (!rows.is_array() || rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out << (i ? "," : "") << (row.contains(keys[i]) ? cell(row.at(keys[i])) : std::string());
    }
    out << "\n";
  }
}

CsvMatrix load_csv_matrix(const std::string& path, HeaderMode header) { return read_csv_matrix(path, header); }

}  // namespace lqcp::cli
