// CSV and JSON emission with stable bytes: fixed number formatting,
// comma separation, insertion-ordered JSON keys. Timestamps are
// confined to run manifests so the scientific outputs of a fixed
// (config, seed) pair compare byte for byte across reruns.

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rotor {

inline constexpr const char* kToolVersion = "rotorlab 0.1.0";

using OrderedJson = nlohmann::ordered_json;

// Shortest text that round-trips the double exactly ('%.17g').
std::string format_double(double value);

using CsvValue = std::variant<std::int64_t, double, std::string>;

// Comma-separated writer with a fixed header row. Fields containing a
// comma, quote, or newline are quoted with doubled inner quotes.
// Throws std::runtime_error when the file cannot be opened and
// std::logic_error when a row width differs from the header.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void write_row(const std::vector<CsvValue>& row);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

// Serializes with two-space indentation and a trailing newline.
// Throws std::runtime_error when the file cannot be opened.
void write_json_file(const std::string& path, const OrderedJson& doc);

// Current time as ISO 8601 UTC, e.g. "2024-05-01T12:00:00Z".
std::string utc_timestamp();

// Run manifest accompanying every output file: command, resolved
// config echo, seed, tool version, start and end timestamps, and the
// paths written. The only place timestamps are allowed.
OrderedJson make_manifest(const std::string& command,
                          const OrderedJson& config_echo, std::uint64_t seed,
                          const std::string& started_at,
                          const std::string& finished_at,
                          const std::vector<std::string>& outputs);

}  // namespace rotor
