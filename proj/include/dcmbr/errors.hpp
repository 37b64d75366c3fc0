#pragma once

#include <stdexcept>
#include <string>

namespace dcmbr {

// Bad configuration (CLI flags, config file, task file). CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Enumeration budget exceeded. CLI maps this to exit 3.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Corpus/text ingestion failure; message names line and token.
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dcmbr
