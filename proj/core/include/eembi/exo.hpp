#pragma once

#include <vector>

#include "eembi/assignment.hpp"
#include "eembi/data.hpp"
#include "eembi/ica.hpp"

namespace eembi {

/// Generated exogenous samples, one column per endogenous variable.
struct ExogenousData {
  std::vector<std::vector<double>> columns;
  bool matched = false;
  bool discretized = false;
  /// After matching, column i is original column permutation[i].
  std::vector<int> permutation;
  /// Per-component convergence of the ICA run that produced the columns.
  std::vector<bool> converged;
};

SampleMatrix to_matrix(const Dataset& d);

/**
 * FastICA with as many components as columns. When every column of d is
 * discrete, entries are binarized: 1 when positive, else 0.
 */
ExogenousData generate_exogenous(const Dataset& d, const IcaOptions& options = {});

/// C(i, j) = -I(x_i; e_j); cells with I <= zero_eps are blocked.
CostMatrix build_cost_matrix(const Dataset& d, const ExogenousData& e, int k = 5, double zero_eps = 0.01);

/// Reorders e by the optimal assignment of build_cost_matrix.
/// Throws AssignmentInfeasible when no assignment avoids the blocked cells.
ExogenousData match_exogenous(const Dataset& d, const ExogenousData& e, int k = 5, double zero_eps = 0.01);

struct SwapViolation {
  int i;
  int j;
};

/**
 * Pairs (i < j) where exchanging the partners of rows i and j is allowed by
 * the blocked cells and would raise the total MI of a matching. `cost` is the
 * cost matrix and `column_for_row` the matching under audit.
 */
std::vector<SwapViolation> audit_matching(const CostMatrix& cost, const std::vector<int>& column_for_row,
                                          double tolerance = 1e-12);

}  // namespace eembi
