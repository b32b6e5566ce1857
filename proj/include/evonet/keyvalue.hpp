#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evonet/network.hpp"

namespace evonet {

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Ordered `key = value` entries. Blank lines and lines starting with '#'
/// are ignored; duplicate keys are errors.
class KeyValues {
 public:
  static KeyValues parse(std::istream& is, const std::string& source = "<input>") {
    KeyValues kv;
    kv.source_ = source;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(source + ":" + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw std::runtime_error(source + ":" + std::to_string(lineno) + ": empty key");
      if (kv.find(key)) throw std::runtime_error(source + ": duplicate key '" + key + "'");
      kv.entries_.emplace_back(std::move(key), std::move(value));
    }
    return kv;
  }

  static KeyValues load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse(in, path);
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return &v;
    return nullptr;
  }

 private:
  std::string source_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

namespace kv {

inline std::runtime_error bad_value(const std::string& key, const std::string& value, const char* what) {
  return std::runtime_error("bad value for '" + key + "': '" + value + "' (" + what + ")");
}

inline double to_double(const std::string& key, const std::string& value) {
  try {
    return detail::parse_double(value);
  } catch (const std::invalid_argument&) {
    throw bad_value(key, value, "expected a number");
  }
}

inline std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw bad_value(key, value, "expected a non-negative integer");
  return v;
}

inline long long to_int(const std::string& key, const std::string& value) {
  long long v = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw bad_value(key, value, "expected an integer");
  return v;
}

inline bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw bad_value(key, value, "expected true or false");
}

/// `lo,hi`
inline Range to_range(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != 2) throw bad_value(key, value, "expected lo,hi");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

inline std::vector<std::size_t> to_index_list(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  if (value.empty()) return out;
  for (const auto& p : split(value, ',')) out.push_back(static_cast<std::size_t>(to_uint(key, p)));
  return out;
}

}  // namespace kv
}  // namespace evonet
