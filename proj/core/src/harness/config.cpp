#include "kqse/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kqse/errors.hpp"
#include "kqse/io.hpp"

namespace kqse::harness {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_integer(const std::string& key, const std::string& text) {
  T v{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("key '" + key + "' expects a nonnegative integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const ConfigError&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + text + "'");
  }
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    if constexpr (std::is_same_v<T, double>) {
      os << format_double(v[i]);
    } else {
      os << v[i];
    }
  }
  return os.str();
}

}  // namespace

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path.string());
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config c;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = origin + ":" + std::to_string(number);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (c.values_.count(full)) throw ConfigError(where + ": duplicate key '" + full + "'");
    c.values_[full] = trim(line.substr(eq + 1));
  }
  return c;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string* Config::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

void Config::remember(const std::string& key, const std::string& value) const {
  defaults_used_.emplace(key, value);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  if (const auto* v = find(key)) return *v;
  remember(key, fallback);
  return fallback;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (const auto* v = find(key)) return parse_real(key, *v);
  remember(key, format_double(fallback));
  return fallback;
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const {
  if (const auto* v = find(key)) return parse_integer<std::size_t>(key, *v);
  remember(key, std::to_string(fallback));
  return fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (const auto* v = find(key)) return parse_integer<std::uint64_t>(key, *v);
  remember(key, std::to_string(fallback));
  return fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (const auto* v = find(key)) {
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "' expects true or false, got '" + *v + "'");
  }
  remember(key, fallback ? "true" : "false");
  return fallback;
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& fallback) const {
  if (const auto* v = find(key)) {
    std::vector<double> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_real(key, item));
    if (out.empty()) throw ConfigError("key '" + key + "' expects a nonempty list");
    return out;
  }
  remember(key, join(fallback));
  return fallback;
}

std::vector<std::size_t> Config::get_sizes(const std::string& key,
                                           const std::vector<std::size_t>& fallback) const {
  if (const auto* v = find(key)) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(*v)) out.push_back(parse_integer<std::size_t>(key, item));
    if (out.empty()) throw ConfigError("key '" + key + "' expects a nonempty list");
    return out;
  }
  remember(key, join(fallback));
  return fallback;
}

std::vector<std::string> Config::get_strings(const std::string& key,
                                             const std::vector<std::string>& fallback) const {
  if (const auto* v = find(key)) {
    auto out = split_list(*v);
    if (out.empty()) throw ConfigError("key '" + key + "' expects a nonempty list");
    return out;
  }
  remember(key, join(fallback));
  return fallback;
}

std::map<std::string, std::string> Config::resolved() const {
  auto out = defaults_used_;
  for (const auto& [k, v] : values_) out[k] = v;
  return out;
}

}  // namespace kqse::harness
