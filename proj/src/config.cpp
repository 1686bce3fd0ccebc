#include "chwig/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace chwig {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

} // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

Config Config::from_string(std::string_view text) {
  Config c;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw BadConfig("line " + std::to_string(lineno) +
                      ": expected key = value");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string val = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty())
      throw BadConfig("line " + std::to_string(lineno) + ": empty key");
    c.kv_[key] = val;
  }
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

void Config::set_pair(const std::string& pair) {
  const auto eq = pair.find('=');
  if (eq == std::string::npos)
    throw BadConfig("override must be key=value: " + pair);
  const std::string key = trim(std::string_view(pair).substr(0, eq));
  const std::string val = trim(std::string_view(pair).substr(eq + 1));
  if (key.empty()) throw BadConfig("override has empty key: " + pair);
  kv_[key] = val;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw BadConfig("missing required key: " + key);
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw BadConfig("key '" + key + "' is not a number: " + s);
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw BadConfig("key '" + key + "' is not an integer: " + s);
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string s = get_string(key);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw BadConfig("key '" + key + "' is not a boolean: " + s);
}

std::uint64_t Config::fnv1a() const {
  std::uint64_t h = 14695981039346656037ull;
  auto absorb = [&h](std::string_view s) {
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : kv_) {
    absorb(k);
    absorb("=");
    absorb(v);
    absorb("\n");
  }
  return h;
}

} // namespace chwig
