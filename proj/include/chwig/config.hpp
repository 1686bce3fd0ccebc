#pragma once

//! Flat key = value configuration with '#' comments, plus an FNV-1a hash of
//! the effective (sorted, normalised) content for output provenance.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "chwig/errors.hpp"

namespace chwig {

class Config {
public:
  static Config from_file(const std::string& path);
  static Config from_string(std::string_view text);

  void set(const std::string& key, const std::string& value);
  //! Apply a "key=value" override (CLI --set).
  void set_pair(const std::string& pair);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  //! FNV-1a (64-bit) over "key=value\n" lines in sorted key order.
  std::uint64_t fnv1a() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

private:
  std::map<std::string, std::string> kv_;
};

} // namespace chwig
