#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace modechoice {

// Wrong, missing, or extra columns; header-level problems.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cell- or row-level data problems. Carries the 0-based data row when known.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
  ValidationError(std::size_t row, const std::string& message)
      : std::runtime_error("row " + std::to_string(row) + ": " + message), row_(row) {}

  const std::optional<std::size_t>& row() const noexcept { return row_; }

 private:
  std::optional<std::size_t> row_;
};

// Invalid generator or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modechoice
