#include "allostery/settings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "allostery/errors.hpp"

namespace allostery::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<std::string>& Settings::known_keys() {
  static const std::vector<std::string> keys{"d",     "m",      "radius", "epsilon", "prime-strategy", "budget-states",
                                             "seed",  "out",    "format", "gamma",   "p",              "element",
                                             "steps", "start",  "A",      "B",       "castle",         "window",
                                             "tolerance"};
  return keys;
}

Settings Settings::parse_config(std::string_view text) {
  Settings s;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::string_view line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    const std::size_t eq = line.find('=');
    const std::size_t indent = static_cast<std::size_t>(trim(line).data() - raw.data());
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, indent + 1);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParseError("unknown key '" + key + "'", line_no, indent + 1);
    }
    if (value.empty()) throw ParseError("empty value for '" + key + "'", line_no, eq + 2);
    s.values_[key].emplace_back(value);
  }
  return s;
}

Settings Settings::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
}

void Settings::merge(const Settings& over) {
  for (const auto& [k, v] : over.values_) values_[k] = v;
}

std::vector<std::string> Settings::all(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? std::vector<std::string>{} : it->second;
}

std::optional<std::string> Settings::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::string Settings::get_or(const std::string& key, std::string fallback) const {
  return get(key).value_or(std::move(fallback));
}

std::size_t Settings::size_or(const std::string& key, std::size_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::size_t out = 0;
  const char* first = v->data();
  const char* last = first + v->size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(key + ": expected a non-negative integer, got '" + *v + "'", 0, static_cast<std::size_t>(ptr - first) + 1);
  }
  return out;
}

}  // namespace allostery::cli
