#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rgc {

// `key = value` text: one pair per line, `#` comments, blank lines ignored,
// lists comma-separated. Insertion order is preserved on output. Also the
// dataset-manifest format.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& is);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get(const std::string& key) const;  // throws Parse if missing
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  std::vector<double> fallback) const;
  std::vector<std::int64_t> get_ints(const std::string& key,
                                     std::vector<std::int64_t> fallback) const;
  std::vector<std::string> get_strings(const std::string& key,
                                       std::vector<std::string> fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  void write(std::ostream& os) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string join_doubles(const std::vector<double>& values);

}  // namespace rgc
