#include "ettrap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ettrap/errors.hpp"
#include "ettrap/geometry.hpp"

namespace ettrap {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
  });
}

double to_double(std::string_view text, const std::string& key, int line) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError("key '" + key + "': expected a finite number, got '" + std::string(t) + "'", line);
  return v;
}

}  // namespace

std::string format_exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::vector<double> parse_grid(std::string_view text, const std::string& key, int line) {
  const std::string_view t = trim(text);
  if (t.empty()) throw ConfigError("key '" + key + "': empty grid", line);
  if (t.find(':') != std::string_view::npos) {
    const auto parts = split(t, ':');
    if (parts.size() < 3 || parts.size() > 4)
      throw ConfigError("key '" + key + "': range must be start:stop:count[:log]", line);
    const double start = to_double(parts[0], key, line);
    const double stop = to_double(parts[1], key, line);
    const double count_d = to_double(parts[2], key, line);
    if (count_d < 1 || count_d != std::floor(count_d) || count_d > 1e7)
      throw ConfigError("key '" + key + "': range count must be a positive integer", line);
    const int count = static_cast<int>(count_d);
    bool log = false;
    if (parts.size() == 4) {
      if (parts[3] == "log") log = true;
      else if (parts[3] != "lin") throw ConfigError("key '" + key + "': range spacing must be 'lin' or 'log'", line);
    }
    if (log && !(start > 0.0 && stop > 0.0)) throw ConfigError("key '" + key + "': log range needs positive ends", line);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out[static_cast<std::size_t>(i)] =
          log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start))) : start + f * (stop - start);
    }
    if (count > 1) {
      out.front() = start;
      out.back() = stop;
    }
    return out;
  }
  std::vector<double> out;
  for (const auto part : split(t, ',')) out.push_back(to_double(part, key, line));
  return out;
}

Config Config::parse(std::string_view text) {
  Config cfg;
  int line_no = 0;
  bool csv_mode = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.rfind("# ettrap", 0) == 0) csv_mode = true;
    if (line.rfind("# config.", 0) == 0) {
      line = line.substr(9);
    } else if (line.empty() || line.front() == '#') {
      continue;
    } else if (csv_mode) {
      continue;
    } else {
      const auto hash = line.find('#');
      if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'", line_no);
    if (value.empty()) throw ConfigError("key '" + key + "' has no value", line_no);
    if (cfg.entries_.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    cfg.entries_[key] = {value, line_no};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'");
  entries_[key] = {value, 0};
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

int Config::line_of(const std::string& key) const {
  const Entry* e = find(key);
  return e ? e->line : 0;
}

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Config::raw(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  const std::string v = e ? e->value : fallback;
  effective_[key] = v;
  return v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const { return raw(key, fallback); }

double Config::get_double(const std::string& key, double fallback) const {
  return to_double(raw(key, format_exact(fallback)), key, line_of(key));
}

int Config::get_int(const std::string& key, int fallback) const {
  const double v = to_double(raw(key, std::to_string(fallback)), key, line_of(key));
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError("key '" + key + "': expected an integer", line_of(key));
  return static_cast<int>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const std::string t(trim(raw(key, std::to_string(fallback))));
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("key '" + key + "': expected an unsigned 64-bit integer, got '" + t + "'", line_of(key));
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const std::string t = raw(key, fallback ? "true" : "false");
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + t + "'", line_of(key));
}

std::vector<double> Config::get_grid(const std::string& key, const std::string& fallback) const {
  return parse_grid(raw(key, fallback), key, line_of(key));
}

std::vector<int> Config::get_int_list(const std::string& key, const std::string& fallback) const {
  std::vector<int> out;
  for (const double v : get_grid(key, fallback)) {
    if (v != std::floor(v) || std::abs(v) > 2e9)
      throw ConfigError("key '" + key + "': expected integers", line_of(key));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Eigen::Vector3d Config::get_orientation(const std::string& key, const std::string& fallback) const {
  const std::string t = raw(key, fallback);
  if (t == "transverse") return polarization_vector(Polarization::Transverse);
  if (t == "longitudinal") return polarization_vector(Polarization::Longitudinal);
  const auto parts = split(t, ',');
  if (parts.size() != 3)
    throw ConfigError("key '" + key + "': expected transverse, longitudinal or 'x, y, z'", line_of(key));
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v[i] = to_double(parts[static_cast<std::size_t>(i)], key, line_of(key));
  if (!(v.norm() > 0.0)) throw ConfigError("key '" + key + "': orientation must be non-zero", line_of(key));
  return v.normalized();
}

void Config::check_keys(const std::set<std::string>& allowed, bool strict, std::ostream* warnings) const {
  for (const auto& [key, entry] : entries_) {
    if (allowed.count(key)) continue;
    if (strict) throw ConfigError("unknown key '" + key + "'", entry.line);
    if (warnings) {
      *warnings << "warning: ";
      if (entry.line > 0) *warnings << "line " << entry.line << ": ";
      *warnings << "ignoring unknown key '" << key << "'\n";
    }
  }
}

}  // namespace ettrap
