#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace ettrap {

/// CSV with a '#'-prefixed metadata block. Cells are stored as text; numbers are
/// written with 9 significant digits.
struct CsvTable {
  std::vector<std::string> metadata;  ///< lines without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name`; throws ConfigError naming the missing column.
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
  void add_row(std::vector<std::string> row);
};

std::string format_number(double v);
std::string format_integer(std::int64_t v);
std::string format_unsigned(std::uint64_t v);

/// Standard metadata block: tool version, command, then "config.key = value" for
/// every entry of `effective` (sorted), then `extra` lines.
std::vector<std::string> metadata_block(const std::string& command, const std::map<std::string, std::string>& effective,
                                        const std::vector<std::string>& extra = {});

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);

/// Version string of the library ("ettrap x.y.z").
std::string tool_version();

}  // namespace ettrap
