#include "eembi/ci.hpp"

#include <algorithm>

namespace eembi {

DSeparationOracle::DSeparationOracle(Graph dag) : dag_(std::move(dag)) {}

double DSeparationOracle::cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const {
  return d_separated(dag_, x, y, z) ? 0.0 : 1.0;
}

Graph augmented_graph(const Graph& dag) {
  const int n = dag.size();
  Graph out(2 * n);
  for (const auto& [a, b] : dag.directed_edges()) out.add_directed(a, b);
  for (int i = 0; i < n; ++i) out.add_directed(n + i, i);
  return out;
}

double CachedMeasure::cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const {
  ++queries_;
  if (!memoize_) {
    ++evaluations_;
    return inner_.cmi(x, y, z);
  }
  NodeSet a = x, b = y, c = z;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::sort(c.begin(), c.end());
  if (b < a) std::swap(a, b);
  Key key{a, b, c};
  {
    std::lock_guard lock(mutex_);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  ++evaluations_;
  const double value = inner_.cmi(a, b, c);
  std::lock_guard lock(mutex_);
  memo_.emplace(std::move(key), value);
  return value;
}

}  // namespace eembi
