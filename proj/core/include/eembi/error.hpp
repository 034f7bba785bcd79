#pragma once

#include <stdexcept>
#include <string>

namespace eembi {

/// Malformed or unreadable input data. Carries the 1-based row and column of
/// the offending cell when one is known (0 otherwise).
class IngestionError : public std::runtime_error {
 public:
  IngestionError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// A learning stage could not complete.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metric inputs are inconsistent or the metric is undefined for them.
class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eembi
