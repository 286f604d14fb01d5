// Layered key-value configuration for the command line tools. A config
// file holds `key = value` lines with '#' comments; each subcommand
// declares its schema (key, type, default or required) and resolution
// applies flag overrides over file values over defaults. Unknown keys
// and malformed values are rejected with one-line errors naming the
// offending key.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rotor {

enum class ValueKind {
  kString,
  kInt,
  kUInt,
  kDouble,
  kBool,
  kIntList,  // comma-separated, e.g. "250,500,1000"
};

struct SchemaEntry {
  std::string key;
  ValueKind kind;
  bool required = false;
  std::string fallback;  // default as text; unused when required
};

// Parses a config file into raw key-value pairs. Throws
// std::runtime_error naming the path and line for syntax errors,
// duplicate keys, or an unreadable file.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Schema-validated configuration with typed accessors. Accessors throw
// std::logic_error for keys absent from the schema, so lookups of
// misspelled keys fail loudly in tests rather than yielding defaults.
class ResolvedConfig {
 public:
  ResolvedConfig() = default;

  bool has(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  friend ResolvedConfig resolve_config(
      const std::vector<SchemaEntry>& schema,
      const std::map<std::string, std::string>& file_values,
      const std::map<std::string, std::string>& overrides);

  std::map<std::string, std::string> values_;
};

// Applies precedence override > file > default, rejects keys outside
// the schema, checks every value parses as its declared type, and
// requires all `required` entries to be present. Throws
// std::runtime_error with a one-line message naming the key.
ResolvedConfig resolve_config(
    const std::vector<SchemaEntry>& schema,
    const std::map<std::string, std::string>& file_values,
    const std::map<std::string, std::string>& overrides);

}  // namespace rotor
