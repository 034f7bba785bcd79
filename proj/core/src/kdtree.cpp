#include "kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace eembi::detail {

KdTree::KdTree(const std::vector<double>& points, std::size_t dim, std::size_t leaf_size)
    : dim_(dim), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  const std::size_t n = dim == 0 ? 0 : points.size() / dim;
  index_.resize(n);
  std::iota(index_.begin(), index_.end(), 0U);
  nodes_.reserve(2 * n / leaf_size_ + 2);
  if (n > 0) build(0, static_cast<std::uint32_t>(n), points);
  pts_.resize(n * dim_);
  for (std::size_t r = 0; r < n; ++r)
    std::copy_n(points.data() + static_cast<std::size_t>(index_[r]) * dim_, dim_, pts_.data() + r * dim_);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, const std::vector<double>& points) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1});
  lo_.resize(lo_.size() + dim_, std::numeric_limits<double>::infinity());
  hi_.resize(hi_.size() + dim_, -std::numeric_limits<double>::infinity());
  double* lo = lo_.data() + static_cast<std::size_t>(id) * dim_;
  double* hi = hi_.data() + static_cast<std::size_t>(id) * dim_;
  for (std::uint32_t r = begin; r < end; ++r) {
    const double* p = points.data() + static_cast<std::size_t>(index_[r]) * dim_;
    for (std::size_t t = 0; t < dim_; ++t) {
      lo[t] = std::min(lo[t], p[t]);
      hi[t] = std::max(hi[t], p[t]);
    }
  }
  if (end - begin <= leaf_size_) return id;

  std::size_t axis = 0;
  double spread = -1.0;
  for (std::size_t t = 0; t < dim_; ++t) {
    if (hi[t] - lo[t] > spread) {
      spread = hi[t] - lo[t];
      axis = t;
    }
  }
  if (spread <= 0.0) return id;  // all points identical

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return points[static_cast<std::size_t>(a) * dim_ + axis] <
                            points[static_cast<std::size_t>(b) * dim_ + axis];
                   });
  const std::int32_t left = build(begin, mid, points);
  const std::int32_t right = build(mid, end, points);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double KdTree::box_lower_bound(std::int32_t node, const double* q) const {
  const double* lo = lo_.data() + static_cast<std::size_t>(node) * dim_;
  const double* hi = hi_.data() + static_cast<std::size_t>(node) * dim_;
  double bound = 0.0;
  for (std::size_t t = 0; t < dim_; ++t) {
    double gap = 0.0;
    if (q[t] < lo[t]) gap = lo[t] - q[t];
    else if (q[t] > hi[t]) gap = q[t] - hi[t];
    if (gap > bound) bound = gap;
  }
  return bound;
}

double KdTree::kth_distance(const double* q, std::size_t k) const {
  std::vector<double> best(k, std::numeric_limits<double>::infinity());
  if (!nodes_.empty()) knn(0, q, best);
  return best.back();
}

void KdTree::knn(std::int32_t node, const double* q, std::vector<double>& best) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  if (nd.left < 0) {
    for (std::uint32_t r = nd.begin; r < nd.end; ++r) {
      const double d = chebyshev(pts_.data() + static_cast<std::size_t>(r) * dim_, q, dim_);
      if (d < best.back()) {
        auto pos = std::upper_bound(best.begin(), best.end() - 1, d);
        std::move_backward(pos, best.end() - 1, best.end());
        *pos = d;
      }
    }
    return;
  }
  const double bl = box_lower_bound(nd.left, q);
  const double br = box_lower_bound(nd.right, q);
  const bool left_first = bl <= br;
  const std::int32_t first = left_first ? nd.left : nd.right;
  const std::int32_t second = left_first ? nd.right : nd.left;
  const double b1 = left_first ? bl : br;
  const double b2 = left_first ? br : bl;
  if (b1 < best.back()) knn(first, q, best);
  if (b2 < best.back()) knn(second, q, best);
}

std::size_t KdTree::count_within(const double* q, double radius) const {
  return nodes_.empty() ? 0 : count(0, q, radius);
}

std::size_t KdTree::count(std::int32_t node, const double* q, double radius) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  const double* lo = lo_.data() + static_cast<std::size_t>(node) * dim_;
  const double* hi = hi_.data() + static_cast<std::size_t>(node) * dim_;
  bool inside = true;
  for (std::size_t t = 0; t < dim_; ++t) {
    if (q[t] < lo[t] && lo[t] - q[t] > radius) return 0;
    if (q[t] > hi[t] && q[t] - hi[t] > radius) return 0;
    const double dl = lo[t] > q[t] ? lo[t] - q[t] : q[t] - lo[t];
    const double dh = hi[t] > q[t] ? hi[t] - q[t] : q[t] - hi[t];
    if (dl > radius || dh > radius) inside = false;
  }
  if (inside) return nd.end - nd.begin;
  if (nd.left < 0) {
    std::size_t c = 0;
    for (std::uint32_t r = nd.begin; r < nd.end; ++r)
      if (chebyshev(pts_.data() + static_cast<std::size_t>(r) * dim_, q, dim_) <= radius) ++c;
    return c;
  }
  return count(nd.left, q, radius) + count(nd.right, q, radius);
}

void KdTree::collect_within(const double* q, double radius, std::vector<std::uint32_t>& out) const {
  if (!nodes_.empty()) collect(0, q, radius, out);
}

void KdTree::collect(std::int32_t node, const double* q, double radius, std::vector<std::uint32_t>& out) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  const double* lo = lo_.data() + static_cast<std::size_t>(node) * dim_;
  const double* hi = hi_.data() + static_cast<std::size_t>(node) * dim_;
  bool inside = true;
  for (std::size_t t = 0; t < dim_; ++t) {
    if (q[t] < lo[t] && lo[t] - q[t] > radius) return;
    if (q[t] > hi[t] && q[t] - hi[t] > radius) return;
    const double dl = lo[t] > q[t] ? lo[t] - q[t] : q[t] - lo[t];
    const double dh = hi[t] > q[t] ? hi[t] - q[t] : q[t] - hi[t];
    if (dl > radius || dh > radius) inside = false;
  }
  if (inside) {
    out.insert(out.end(), index_.begin() + nd.begin, index_.begin() + nd.end);
    return;
  }
  if (nd.left < 0) {
    for (std::uint32_t r = nd.begin; r < nd.end; ++r)
      if (chebyshev(pts_.data() + static_cast<std::size_t>(r) * dim_, q, dim_) <= radius) out.push_back(index_[r]);
    return;
  }
  collect(nd.left, q, radius, out);
  collect(nd.right, q, radius, out);
}

}  // namespace eembi::detail
