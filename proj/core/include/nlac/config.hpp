#pragma once

#include <map>
#include <string>
#include <vector>

namespace nlac {

// Flat key-value configuration with [section] headers. Keys are addressed as
// "section.key"; values are plain strings until a typed getter asks.
// '#' and ';' start comments; later assignments win.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  // "section.key=value"; creates or replaces.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;  // throws when missing
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated list of reals; empty when the key is absent.
  std::vector<double> get_double_list(const std::string& key) const;

  // All numeric entries of one section, keyed without the section prefix.
  std::map<std::string, double> section_doubles(const std::string& section) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace nlac
