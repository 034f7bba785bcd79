#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "eembi/error.hpp"

namespace eembi {

/// Square cost matrix. Cells holding +infinity may not be assigned.
class CostMatrix {
 public:
  static constexpr double infeasible = std::numeric_limits<double>::infinity();

  CostMatrix() = default;
  explicit CostMatrix(std::size_t n, double fill = 0.0) : n_(n), values_(n * n, fill) {}
  /// Row-major values; throws std::invalid_argument unless values.size() == n * n.
  CostMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  bool blocked(std::size_t i, std::size_t j) const { return (*this)(i, j) == infeasible; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

struct Assignment {
  /// Row i is assigned column column_for_row[i].
  std::vector<int> column_for_row;
  double cost = 0.0;
};

/// No permutation avoids the blocked cells.
class AssignmentInfeasible : public PipelineError {
 public:
  AssignmentInfeasible(const std::string& what, std::vector<int> rows)
      : PipelineError(what), rows_(std::move(rows)) {}
  /// Rows whose feasible columns are too few to go around (a Hall violator).
  const std::vector<int>& blocked_rows() const noexcept { return rows_; }

 private:
  std::vector<int> rows_;
};

/**
 * Minimum-cost perfect assignment by shortest augmenting paths with dual
 * potentials. Blocked cells become a finite cost larger than any feasible
 * total, and the result is rejected afterwards if it uses one.
 * Throws std::invalid_argument on NaN or -infinity entries.
 */
Assignment solve_assignment(const CostMatrix& c);

}  // namespace eembi
