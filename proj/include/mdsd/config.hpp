// SPDX-License-Identifier: Apache-2.0
//
// Flat "section.key = value" configuration text. '#' starts a comment,
// list values are comma separated. Lookups record which keys were used so
// leftovers can be rejected as typos.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mdsd {

class Config {
 public:
  /// Throws ConfigError naming the line of a malformed or repeated key.
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, std::string value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback) const;

  /// Throws ConfigError listing keys never read through a getter.
  void reject_unused() const;

  /// Canonical text: keys sorted, one per line.
  std::string to_text() const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  const std::string* find(const std::string& key) const;

  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

}  // namespace mdsd
