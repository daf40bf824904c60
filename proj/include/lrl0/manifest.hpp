#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>
#include <type_traits>

#include "lrl0/error.hpp"

namespace lrl0 {

/// Shortest decimal text that parses back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_real(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw Error(ErrorCode::invalid_argument, "not a number: '" + text + "'");
  return v;
}

/// Flat key=value record of everything needed to regenerate an output image.
/// Keys are written in sorted order, one per line.
class RunManifest {
 public:
  void set(const std::string& key, std::string value) {
    if (key.empty() || key.find_first_of("=\n") != std::string::npos ||
        value.find('\n') != std::string::npos)
      throw Error(ErrorCode::invalid_argument, "manifest keys/values must be single-line");
    entries_[key] = std::move(value);
  }
  void set(const std::string& key, double value) { set(key, format_real(value)); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  template <class Int>
    requires std::is_integral_v<Int>
  void set(const std::string& key, Int value) { set(key, std::to_string(value)); }

  bool has(const std::string& key) const { return entries_.contains(key); }

  const std::string& get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw Error(ErrorCode::invalid_argument, "manifest lacks key '" + key + "'");
    return it->second;
  }
  double get_real(const std::string& key) const { return parse_real(get(key)); }
  long long get_int(const std::string& key) const {
    const std::string& text = get(key);
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
      throw Error(ErrorCode::invalid_argument, "manifest key '" + key + "' is not an integer");
    return v;
  }
  unsigned long long get_uint(const std::string& key) const {
    const std::string& text = get(key);
    unsigned long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
      throw Error(ErrorCode::invalid_argument, "manifest key '" + key + "' is not an integer");
    return v;
  }

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
  }

  static RunManifest parse(const std::string& text) {
    RunManifest m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::malformed_data, "manifest line without key=value: '" + line + "'");
      m.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write manifest " + path.string());
    out << to_string();
    if (!out) throw Error(ErrorCode::io, "write failed: " + path.string());
  }

  static RunManifest load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open manifest " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

 private:
  std::map<std::string, std::string> entries_;
};

/// Sidecar path for an output image: "out.pgm" -> "out.pgm.manifest".
inline std::filesystem::path manifest_path_for(const std::filesystem::path& image) {
  return std::filesystem::path(image.string() + ".manifest");
}

}  // namespace lrl0
