#include "rotor/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace rotor {

namespace {

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return text.substr(begin, end - begin);
}

[[noreturn]] void fail_value(const std::string& key, const char* expected,
                             const std::string& got) {
  throw std::runtime_error("config: key '" + key + "': expected " + expected +
                           ", got '" + got + "'");
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    fail_value(key, "an integer", text);
  }
  return value;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  if (!text.empty() && text[0] == '-') {
    fail_value(key, "a non-negative integer", text);
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    fail_value(key, "a non-negative integer", text);
  }
  return value;
}

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    fail_value(key, "a number", text);
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") {
    return true;
  }
  if (text == "false" || text == "0") {
    return false;
  }
  fail_value(key, "a boolean (true/false)", text);
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& text) {
  std::vector<int> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        trim(text.substr(pos, comma == std::string::npos ? std::string::npos
                                                         : comma - pos));
    if (item.empty()) {
      fail_value(key, "a comma-separated integer list", text);
    }
    values.push_back(static_cast<int>(parse_int(key, item)));
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return values;
}

void check_kind(const std::string& key, ValueKind kind,
                const std::string& text) {
  switch (kind) {
    case ValueKind::kString:
      break;
    case ValueKind::kInt:
      parse_int(key, text);
      break;
    case ValueKind::kUInt:
      parse_uint(key, text);
      break;
    case ValueKind::kDouble:
      parse_double(key, text);
      break;
    case ValueKind::kBool:
      parse_bool(key, text);
      break;
    case ValueKind::kIntList:
      parse_int_list(key, text);
      break;
  }
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot read '" + path + "'");
  }
  std::map<std::string, std::string> values;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: " + path + ": line " +
                               std::to_string(line_number) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::runtime_error("config: " + path + ": line " +
                               std::to_string(line_number) +
                               ": expected 'key = value'");
    }
    if (values.count(key) != 0) {
      throw std::runtime_error("config: " + path + ": line " +
                               std::to_string(line_number) +
                               ": duplicate key '" + key + "'");
    }
    values[key] = value;
  }
  return values;
}

bool ResolvedConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

const std::string& ResolvedConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::logic_error("config: key '" + key + "' not in schema");
  }
  return it->second;
}

std::int64_t ResolvedConfig::get_int(const std::string& key) const {
  return parse_int(key, get_string(key));
}

std::uint64_t ResolvedConfig::get_uint(const std::string& key) const {
  return parse_uint(key, get_string(key));
}

double ResolvedConfig::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

bool ResolvedConfig::get_bool(const std::string& key) const {
  return parse_bool(key, get_string(key));
}

std::vector<int> ResolvedConfig::get_int_list(const std::string& key) const {
  return parse_int_list(key, get_string(key));
}

ResolvedConfig resolve_config(
    const std::vector<SchemaEntry>& schema,
    const std::map<std::string, std::string>& file_values,
    const std::map<std::string, std::string>& overrides) {
  const auto find_entry = [&](const std::string& key) -> const SchemaEntry* {
    for (const SchemaEntry& entry : schema) {
      if (entry.key == key) {
        return &entry;
      }
    }
    return nullptr;
  };
  for (const auto& [key, value] : file_values) {
    (void)value;
    if (find_entry(key) == nullptr) {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }
  for (const auto& [key, value] : overrides) {
    (void)value;
    if (find_entry(key) == nullptr) {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }

  ResolvedConfig resolved;
  for (const SchemaEntry& entry : schema) {
    std::string text;
    if (const auto it = overrides.find(entry.key); it != overrides.end()) {
      text = it->second;
    } else if (const auto fit = file_values.find(entry.key);
               fit != file_values.end()) {
      text = fit->second;
    } else if (!entry.required) {
      text = entry.fallback;
    } else {
      throw std::runtime_error("config: missing required key '" + entry.key +
                               "'");
    }
    check_kind(entry.key, entry.kind, text);
    resolved.values_[entry.key] = text;
  }
  return resolved;
}

}  // namespace rotor
