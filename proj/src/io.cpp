#include "rotor/io.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace rotor {

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string quoted = "\"";
  for (const char c : field) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string csv_format(const CsvValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&value)) {
    return format_double(*d);
  }
  return csv_escape(std::get<std::string>(value));
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path), columns_(header.size()), out_(path) {
  if (!out_) {
    throw std::runtime_error("io: cannot open '" + path + "' for writing");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) {
      out_ << ',';
    }
    out_ << csv_escape(header[i]);
  }
  out_ << '\n';
}

void CsvWriter::write_row(const std::vector<CsvValue>& row) {
  if (row.size() != columns_) {
    throw std::logic_error("io: row width " + std::to_string(row.size()) +
                           " does not match header width " +
                           std::to_string(columns_) + " in '" + path_ + "'");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) {
      out_ << ',';
    }
    out_ << csv_format(row[i]);
  }
  out_ << '\n';
}

void write_json_file(const std::string& path, const OrderedJson& doc) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("io: cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

OrderedJson make_manifest(const std::string& command,
                          const OrderedJson& config_echo, std::uint64_t seed,
                          const std::string& started_at,
                          const std::string& finished_at,
                          const std::vector<std::string>& outputs) {
  OrderedJson manifest;
  manifest["command"] = command;
  manifest["version"] = kToolVersion;
  manifest["seed"] = seed;
  manifest["config"] = config_echo;
  manifest["started_at"] = started_at;
  manifest["finished_at"] = finished_at;
  manifest["outputs"] = outputs;
  return manifest;
}

}  // namespace rotor
