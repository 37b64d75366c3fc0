#include "dcmbr/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "dcmbr/errors.hpp"

namespace dcmbr {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) throw ConfigError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

void append_cell(std::string& out, const std::string& cell) {
  if (!needs_quoting(cell)) {
    out += cell;
    return;
  }
  out += '"';
  for (const char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    append_cell(out, row[i]);
  }
  out += '\n';
}

}  // namespace

std::string report_to_csv(const Report& report) {
  if (report.header.empty()) throw ConfigError("report_to_csv: header is empty");
  for (const auto& row : report.rows) {
    if (row.size() != report.header.size()) {
      throw ConfigError("report_to_csv: row width does not match header");
    }
  }
  std::string out;
  append_row(out, report.header);
  for (const auto& row : report.rows) append_row(out, row);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IngestError("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IngestError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IngestError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace dcmbr
