#include "rgc/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rgc/error.hpp"
#include "rgc/io.hpp"

namespace rgc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorCode::kParse, "key '" + key + "': '" + text +
                                       "' is not a number");
  }
  return v;
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorCode::kParse, "key '" + key + "': '" + text +
                                       "' is not an integer");
  }
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& is) {
  KeyValueConfig out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                         ": expected 'key = value'");
    }
    out.set(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return out;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  auto is = open_input(path);
  return parse(is);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.first == key; });
  if (it != entries_.end()) {
    it->second = value;
  } else {
    entries_.emplace_back(key, value);
  }
}

bool KeyValueConfig::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

std::string KeyValueConfig::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::kParse, "missing key '" + key + "'");
}

std::string KeyValueConfig::get_or(const std::string& key,
                                   const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, get(key)) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key,
                                     std::int64_t fallback) const {
  return has(key) ? to_int(key, get(key)) : fallback;
}

std::vector<double> KeyValueConfig::get_doubles(
    const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(get(key))) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::int64_t> KeyValueConfig::get_ints(
    const std::string& key, std::vector<std::int64_t> fallback) const {
  if (!has(key)) return fallback;
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(get(key))) out.push_back(to_int(key, item));
  return out;
}

std::vector<std::string> KeyValueConfig::get_strings(
    const std::string& key, std::vector<std::string> fallback) const {
  return has(key) ? split_list(get(key)) : fallback;
}

void KeyValueConfig::write(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace rgc
