#ifndef RULEMINE_ERRORS_HPP
#define RULEMINE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rulemine {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header/column layout or schema document does not match expectations.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A cell could not be interpreted. `row` is 1-based over data rows.
class ValueError : public Error {
 public:
  ValueError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

}  // namespace rulemine

#endif
