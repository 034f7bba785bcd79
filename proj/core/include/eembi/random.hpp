#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace eembi {

/**
 * Seeded random source with platform-independent output.
 *
 * The engine is std::mt19937_64, whose sequence is fixed by the standard. The
 * distributions are implemented here because the standard library ones are
 * allowed to differ between implementations, and runs must be reproducible
 * bit for bit from a seed.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  double normal();
  /// Laplace with zero mean and unit variance.
  double laplace();
  /// Exponential with unit rate.
  double exponential();
  /// Uniformly random permutation of 0..n-1.
  std::vector<int> permutation(int n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace eembi
