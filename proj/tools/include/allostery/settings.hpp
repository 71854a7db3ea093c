#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace allostery::cli {

/// Layered key/value settings. Later layers replace earlier ones key by key:
/// config file, then environment, then command-line flags.
class Settings {
 public:
  /// Parses `key = value` lines; '#' starts a comment. Repeating a key
  /// appends (used for gamma). Unknown keys raise ParseError with position.
  static Settings parse_config(std::string_view text);
  static Settings from_file(const std::string& path);

  void set(const std::string& key, std::vector<std::string> values) { values_[key] = std::move(values); }
  void merge(const Settings& over);

  bool has(const std::string& key) const { return values_.contains(key); }
  std::vector<std::string> all(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  std::size_t size_or(const std::string& key, std::size_t fallback) const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::vector<std::string>> values_;
};

}  // namespace allostery::cli
