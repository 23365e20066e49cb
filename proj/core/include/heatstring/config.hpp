#pragma once

// Flat sectioned key = value configuration.
//
//   # comment            ; also a comment
//   [section]
//   key = value          # trailing comments are allowed
//
// Keys before the first section header belong to section "". Section and key
// names are case-sensitive; values are trimmed. Duplicate keys, lines without
// '=' and malformed headers raise ParseError with the 1-based line number.
// Typed getters raise ParseError pointing at the line of the offending value.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace heatstring {

class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  // Comma or whitespace separated list of reals.
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

  // Required variants: ParseError when the key is missing.
  double require_double(const std::string& section, const std::string& key) const;
  int require_int(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  // "section.key" for every entry no getter has asked for.
  std::vector<std::string> unused_keys() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  const Entry* find(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace heatstring
