#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace eembi::detail {

/// Largest per-coordinate absolute difference.
inline double chebyshev(const double* a, const double* b, std::size_t dim) {
  double d = 0.0;
  for (std::size_t t = 0; t < dim; ++t) {
    const double diff = a[t] > b[t] ? a[t] - b[t] : b[t] - a[t];
    if (diff > d) d = diff;
  }
  return d;
}

/**
 * Static kd-tree for exact l-infinity queries.
 *
 * Box tests use the same floating-point differences as chebyshev(), and
 * rounded subtraction is monotone, so pruned and brute-force answers agree
 * exactly, including on ties at the query radius.
 */
class KdTree {
 public:
  /// points: row-major, size() * dim values.
  KdTree(const std::vector<double>& points, std::size_t dim, std::size_t leaf_size = 12);

  std::size_t size() const noexcept { return index_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  /// The k-th smallest distance (k >= 1) from q to the stored points,
  /// counting a stored copy of q itself at distance 0.
  double kth_distance(const double* q, std::size_t k) const;

  /// Number of stored points at distance <= radius from q.
  std::size_t count_within(const double* q, double radius) const;

  /// Appends the original indices of stored points at distance <= radius.
  void collect_within(const double* q, double radius, std::vector<std::uint32_t>& out) const;

  /// Original point indices in leaf order; visiting queries in this order
  /// keeps consecutive searches on nearby tree paths.
  const std::vector<std::uint32_t>& leaf_order() const noexcept { return index_; }

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, const std::vector<double>& points);
  void knn(std::int32_t node, const double* q, std::vector<double>& best) const;
  std::size_t count(std::int32_t node, const double* q, double radius) const;
  void collect(std::int32_t node, const double* q, double radius, std::vector<std::uint32_t>& out) const;
  double box_lower_bound(std::int32_t node, const double* q) const;

  std::size_t dim_;
  std::size_t leaf_size_;
  std::vector<std::uint32_t> index_;
  std::vector<double> pts_;  // reordered copy, row-major
  std::vector<Node> nodes_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace eembi::detail
