#include "heatstring/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "heatstring/errors.hpp"

namespace heatstring {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& what) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError(line, "cannot parse '" + text + "' as " + what);
  }
  return value;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string section;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError(number, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) throw ParseError(number, "empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(number, "empty key");
    auto& entries = cfg.sections_[section];
    if (entries.count(key) != 0) {
      throw ParseError(number, "duplicate key '" + key + "' (first set on line " +
                                   std::to_string(entries.at(key).line) + ")");
    }
    entries[key] = Entry{value, number, false};
  }
  return cfg;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
  return parse(in);
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto e = s->second.find(key);
  if (e == s->second.end()) return nullptr;
  e->second.used = true;
  return &e->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) != 0;
}

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  return e->value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? parse_number<double>(e->value, e->line, "a real number") : fallback;
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? parse_number<int>(e->value, e->line, "an integer") : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  return e != nullptr ? parse_number<std::uint64_t>(e->value, e->line, "an unsigned integer")
                      : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return fallback;
  std::string v = e->value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError(e->line, "cannot parse '" + e->value + "' as a boolean");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return {};
  std::string text = e->value;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_number<double>(token, e->line, "a real number"));
  return out;
}

double Config::require_double(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ParseError(0, "missing required key [" + section + "] " + key);
  return get_double(section, key, 0.0);
}

int Config::require_int(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ParseError(0, "missing required key [" + section + "] " + key);
  return get_int(section, key, 0);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = Entry{value, 0, false};
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      if (!entry.used) out.push_back(section.empty() ? key : section + "." + key);
    }
  }
  return out;
}

}  // namespace heatstring
