#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ettrap {

/// Flat "key = value" configuration. '#' starts a comment. Lines of the form
/// "# config.key = value" are read as entries, so the metadata block of any CSV
/// written by the tool is itself a valid configuration (data rows are skipped).
///
/// Grids accept a comma-separated list or a range "start:stop:count[:log]".
/// Every typed read records the value actually used (defaults included) in
/// effective(), which is what gets embedded in output metadata.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  /// Overrides or adds an entry (command-line flags).
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::vector<std::string> keys() const;
  int line_of(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_grid(const std::string& key, const std::string& fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::string& fallback) const;
  /// "transverse", "longitudinal" or three components "x, y, z" (normalised).
  Eigen::Vector3d get_orientation(const std::string& key, const std::string& fallback) const;

  /// Unknown keys raise ConfigError when `strict`, otherwise a warning is written.
  void check_keys(const std::set<std::string>& allowed, bool strict, std::ostream* warnings) const;

  const std::map<std::string, std::string>& effective() const { return effective_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry* find(const std::string& key) const;
  std::string raw(const std::string& key, const std::string& fallback) const;

  std::map<std::string, Entry> entries_;
  mutable std::map<std::string, std::string> effective_;
};

/// Parses a grid expression (list or range triple). `line` is used in errors.
std::vector<double> parse_grid(std::string_view text, const std::string& key = "grid", int line = 0);

/// Shortest decimal text that parses back to the same double.
std::string format_exact(double v);

}  // namespace ettrap
