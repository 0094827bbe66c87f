#include "lqcp/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace lqcp {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view field) {
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

CsvMatrix read_csv_matrix(std::istream& in, HeaderMode header) {
  std::vector<std::string> names;
  std::vector<double> values;
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t file_row = 0;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    ++file_row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      p = fields.size();
      bool is_header = header == HeaderMode::Present;
      if (header == HeaderMode::Auto) {
        for (auto f : fields) {
          if (!parse_double(f)) {
            is_header = true;
            break;
          }
        }
      }
      if (is_header) {
        for (auto f : fields) names.push_back(unquote(f));
        continue;
      }
    }
    if (fields.size() != p) {
      throw Error(ErrorCode::NonRectangular, "row " + std::to_string(file_row) + " has " +
                                                 std::to_string(fields.size()) + " fields, expected " +
                                                 std::to_string(p));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto v = parse_double(fields[j]);
      if (!v) {
        throw Error(ErrorCode::Parse, "row " + std::to_string(file_row) + ", column " + std::to_string(j + 1) +
                                          ": '" + std::string(fields[j]) + "'");
      }
      values.push_back(*v);
    }
    ++n;
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read failure");
  if (n == 0 || p == 0) throw Error(ErrorCode::Empty, "no data rows");
  return CsvMatrix{DataMatrix(n, p, std::move(values)), std::move(names)};
}

CsvMatrix read_csv_matrix(const std::string& path, HeaderMode header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_csv_matrix(in, header);
}

void write_csv_matrix(std::ostream& out, const DataMatrix& x, const std::vector<std::string>& column_names) {
  if (!column_names.empty()) {
    if (column_names.size() != x.p()) {
      throw Error(ErrorCode::DimensionMismatch, "column name count does not match p");
    }
    for (std::size_t j = 0; j < column_names.size(); ++j) out << (j ? "," : "") << column_names[j];
    out << '\n';
  }
  char buf[32];
  for (std::size_t t = 0; t < x.n(); ++t) {
    for (std::size_t l = 0; l < x.p(); ++l) {
      std::snprintf(buf, sizeof buf, "%.17g", x(t, l));
      out << (l ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_csv_matrix(const std::string& path, const DataMatrix& x, const std::vector<std::string>& column_names) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_csv_matrix(out, x, column_names);
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path);
}

}  // namespace lqcp
