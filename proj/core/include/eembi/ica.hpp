#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace eembi {

/// Rows are samples, columns are variables.
using SampleMatrix = Eigen::MatrixXd;

struct Whitened {
  SampleMatrix data;
  Eigen::VectorXd mean;
  /// Symmetric transform U S^-1/2 U^T of the covariance; data = (x - mean) T.
  Eigen::MatrixXd transform;
  /// True when some covariance eigenvalue was raised to the floor.
  bool regularized = false;
};

/**
 * Centers and whitens. The covariance uses the N - 1 normalization, and
 * eigenvalues below 1e-10 * trace / n are raised to that floor.
 * Throws std::invalid_argument unless N > n >= 1.
 */
Whitened whiten(const SampleMatrix& x);

enum class Contrast { logcosh, exp };

struct IcaOptions {
  double tol = 1e-4;
  int max_iter = 200;
  std::uint64_t seed = 0;
  Contrast contrast = Contrast::logcosh;
};

struct IcaResult {
  /// Row p is the unit-norm direction of component p in whitened space.
  Eigen::MatrixXd unmixing;
  Whitened whitening;
  std::vector<int> iterations;
  std::vector<bool> converged;
  /// Recovered components, one column each: whitening.data * unmixing^T.
  SampleMatrix sources;

  bool all_converged() const;
};

/**
 * Deflationary FastICA with the Newton update
 *   w+ = w - (E[z g(w'z)] - b w) / (E[g'(w'z)] - b),  b = E[w'z g(w'z)],
 * followed by Gram-Schmidt against earlier components and renormalization.
 * A component stops when |<w+, w>| > 1 - tol or after max_iter updates.
 * Throws PipelineError naming the component if an update is not finite.
 */
IcaResult fast_ica(const SampleMatrix& x, int n_components, const IcaOptions& options = {});

}  // namespace eembi
