#pragma once

#include <string>
#include <vector>

namespace dcmbr {

// shortest decimal string that parses back to exactly the same double
std::string format_double(double value);

// tabular experiment output: every cell is already a string so the CSV
// bytes are a pure function of the rows, independent of locale or stream state
struct Report {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-style CSV with '\n' line endings; cells are quoted only when they
// contain a comma, quote, or newline
std::string report_to_csv(const Report& report);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace dcmbr
