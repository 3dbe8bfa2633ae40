#include "convgp/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace convgp::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: key `" + key + "` has non-numeric value `" + s + "`");
  }
  if (pos != s.size()) throw ConfigError("config: key `" + key + "` has trailing characters in `" + s + "`");
  return v;
}

int parse_int(const std::string& key, const std::string& s) {
  const double v = parse_double(key, s);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config: key `" + key + "` expects an integer, got `" + s + "`");
  return i;
}

}  // namespace

Config Config::parse_text(const std::string& text, const std::vector<std::string>& allowed_keys) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
    if (std::find(allowed_keys.begin(), allowed_keys.end(), key) == allowed_keys.end())
      throw ConfigError("config: unknown key `" + key + "`");
    if (cfg.values_.count(key)) throw ConfigError("config: duplicate key `" + key + "`");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path, const std::vector<std::string>& allowed_keys) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), allowed_keys);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(key, it->second);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config: key `" + key + "` expects true/false");
}

std::vector<std::string> Config::get_string_list(const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  auto items = split_list(it->second);
  if (items.empty() || (items.size() == 1 && items[0].empty()))
    throw ConfigError("config: key `" + key + "` has an empty list");
  return items;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : get_string_list(key, {})) out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  for (const auto& item : get_string_list(key, {})) out.push_back(parse_int(key, item));
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

double require_positive(double v, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError("config: key `" + key + "` must be positive");
  return v;
}

int require_positive(int v, const std::string& key) {
  if (v <= 0) throw ConfigError("config: key `" + key + "` must be positive");
  return v;
}

}  // namespace convgp::harness
