#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lqcp/datamodel.hpp"

namespace lqcp {

enum class HeaderMode { Absent, Present, Auto };

struct CsvMatrix {
  DataMatrix data;
  std::vector<std::string> column_names;  // empty when the file had no header
};

/// Comma-separated, '.' decimal point, one optional header row. Blank lines are
/// skipped. Throws Io, Parse (1-based row/col of the file), Empty, NonRectangular
/// or NonFiniteEntry.
CsvMatrix read_csv_matrix(std::istream& in, HeaderMode header = HeaderMode::Auto);
CsvMatrix read_csv_matrix(const std::string& path, HeaderMode header = HeaderMode::Auto);

void write_csv_matrix(std::ostream& out, const DataMatrix& x,
                      const std::vector<std::string>& column_names = {});
void write_csv_matrix(const std::string& path, const DataMatrix& x,
                      const std::vector<std::string>& column_names = {});

}  // namespace lqcp
