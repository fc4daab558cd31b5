#include "ettrap/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ettrap/errors.hpp"

namespace ettrap {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string tool_version() { return std::string("ettrap ") + ETTRAP_VERSION_STRING; }

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ConfigError("missing column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& cell = rows[r].at(c);
    if (cell == "nan" || cell == "-nan") {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError("column '" + name + "' row " + std::to_string(r + 1) + ": not a number: '" + cell + "'");
    }
  }
  return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw std::logic_error("row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_integer(std::int64_t v) { return std::to_string(v); }
std::string format_unsigned(std::uint64_t v) { return std::to_string(v); }

std::vector<std::string> metadata_block(const std::string& command, const std::map<std::string, std::string>& effective,
                                        const std::vector<std::string>& extra) {
  std::vector<std::string> out;
  out.push_back(tool_version());
  out.push_back("command = " + command);
  for (const auto& [k, v] : effective) out.push_back("config." + k + " = " + v);
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& m : table.metadata) out << "# " << m << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.metadata.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    auto cells = split_cells(line);
    if (!header) {
      t.columns = std::move(cells);
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size())
      throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(t.columns.size()));
    t.rows.push_back(std::move(cells));
  }
  if (!header) throw ConfigError("CSV has no header row");
  return t;
}

}  // namespace ettrap
