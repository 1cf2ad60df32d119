#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kqse::harness {

// Flat key=value configuration with [section] headers. Keys are addressed as
// "section.key". Lines starting with '#' or ';' are comments.
//
//   [run]
//   seed = 7
//   [kde]
//   kernel = gaussian
//
// Getters take a fallback; every fallback actually used is remembered so that
// resolved() reports the full configuration an experiment ran with.
class Config {
 public:
  static Config from_file(const std::filesystem::path& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::size_t> get_sizes(const std::string& key,
                                     const std::vector<std::size_t>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key,
                                       const std::vector<std::string>& fallback) const;

  // Explicit entries merged with the fallbacks used so far.
  std::map<std::string, std::string> resolved() const;

 private:
  const std::string* find(const std::string& key) const;
  void remember(const std::string& key, const std::string& value) const;

  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> defaults_used_;
};

}  // namespace kqse::harness
