#pragma once

#include <cstddef>
#include <vector>

#include "eembi/data.hpp"
#include "eembi/graph.hpp"

namespace eembi {

/// Digamma function for x > 0; absolute error below 1e-10 for x >= 1.
double digamma(double x);

/// I(X; Y | Z) over dataset columns.
struct CmiQuery {
  std::vector<int> x_cols;
  std::vector<int> y_cols;
  std::vector<int> z_cols;
  int k = 5;
};

struct KnnOptions {
  int k = 5;
  /// Use kd-trees for neighbor search; the counts are identical to brute force.
  bool use_index = true;
  /// Worker threads for the per-row terms. The sum is taken in row order, so
  /// the result does not depend on this value.
  int threads = 1;
};

/**
 * k-nearest-neighbor estimator of conditional mutual information, in nats.
 *
 * For each row i, rho_i is the l-infinity distance to its k-th nearest other
 * row in the joint (X, Y, Z) space. With
 *   k~_i   = other rows within rho_i in the joint space (ties included),
 *   N_XZ,i, N_YZ,i, N_Z,i = rows within rho_i in the subspaces, row i included,
 * the estimate is the mean of psi(k~_i) - psi(N_XZ,i) - psi(N_YZ,i) + psi(N_Z,i),
 * with N_Z,i = N when Z is empty. On continuous data k~_i = k; on discrete
 * data the tie counting makes the estimator consistent. Estimates can be
 * slightly negative and are returned unclamped.
 */
class KnnCmiEstimator {
 public:
  KnnCmiEstimator(std::vector<std::vector<double>> columns, KnnOptions options = {});
  explicit KnnCmiEstimator(const Dataset& d, KnnOptions options = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t variables() const noexcept { return columns_.size(); }
  const KnnOptions& options() const noexcept { return options_; }

  /// Throws std::invalid_argument if x or y is empty, the sets overlap or
  /// repeat a column, an index is out of range, or k >= N.
  double estimate(const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& z) const;

 private:
  std::vector<std::vector<double>> columns_;
  KnnOptions options_;
  std::size_t rows_ = 0;
  std::vector<double> digamma_;  // digamma_[m] = psi(m), m = 1..N
};

double knn_cmi(const Dataset& d, const CmiQuery& q);

/// I(X; Y) as the Z-empty case of knn_cmi.
double mutual_information(const Dataset& d, const std::vector<int>& x_cols, const std::vector<int>& y_cols,
                          int k = 5);

/**
 * Joint probability table over discrete variables. Configurations are laid
 * out row-major: the first variable varies slowest.
 */
class JointTable {
 public:
  /// Throws std::invalid_argument on negative mass, a size mismatch, or total
  /// mass further than 1e-12 from 1.
  JointTable(std::vector<int> arity, std::vector<double> mass);

  const std::vector<int>& arity() const noexcept { return arity_; }
  const std::vector<double>& mass() const noexcept { return mass_; }
  std::size_t variables() const noexcept { return arity_.size(); }
  /// Value of variable v in configuration index c.
  int value(std::size_t c, std::size_t v) const;

 private:
  std::vector<int> arity_;
  std::vector<double> mass_;
  std::vector<std::size_t> stride_;
};

/// I(X; Y | Z) in nats by direct summation over the table, with 0 ln 0 = 0.
double exact_cmi_discrete(const JointTable& t, const NodeSet& x, const NodeSet& y, const NodeSet& z);

/// Relative-frequency table of the given discrete columns.
JointTable empirical_joint(const Dataset& d, const std::vector<int>& cols);

}  // namespace eembi
