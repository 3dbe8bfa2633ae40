#pragma once

#include <map>
#include <string>
#include <vector>

#include "convgp/errors.hpp"

namespace convgp::harness {

// Flat `key = value` config with `#` comments and comma-separated lists.
// Parsing rejects keys outside the experiment's vocabulary.
class Config {
 public:
  static Config parse_file(const std::string& path, const std::vector<std::string>& allowed_keys);
  static Config parse_text(const std::string& text, const std::vector<std::string>& allowed_keys);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::vector<std::string>& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

  // Sorted `key = value` lines; the config-hash input.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

// Positive-value guards used by the experiment runners.
double require_positive(double v, const std::string& key);
int require_positive(int v, const std::string& key);

}  // namespace convgp::harness
