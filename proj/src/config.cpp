// SPDX-License-Identifier: Apache-2.0

#include "mdsd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mdsd/error.hpp"

namespace mdsd {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
  }
  return v;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'section.key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || key.find('.') == std::string::npos || key.front() == '.' ||
        key.back() == '.') {
      throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                        "' must have the form section.key");
    }
    if (!cfg.entries_.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' repeated");
    }
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

void Config::set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

const std::string* Config::find(const std::string& key) const {
  used_.insert(key);
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto* v = find(key);
  return v ? *v : fallback;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto* v = find(key);
  return v ? parse_number<double>(key, *v) : fallback;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto* v = find(key);
  return v ? parse_number<std::int64_t>(key, *v) : fallback;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto* v = find(key);
  return v ? parse_number<std::uint64_t>(key, *v) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + *v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key,
                                          const std::vector<std::string>& fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::vector<std::string> out;
  std::string_view rest = *v;
  for (;;) {
    const auto comma = rest.find(',');
    auto item = trim(rest.substr(0, comma));
    if (item.empty()) throw ConfigError("key '" + key + "': empty list item");
    out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

void Config::reject_unused() const {
  std::string unknown;
  for (const auto& [k, v] : entries_) {
    if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw ConfigError("unknown config key(s): " + unknown);
}

std::string Config::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace mdsd
