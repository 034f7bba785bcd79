#include "eembi/intersect.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

namespace eembi {

namespace {

NodeSet without(const NodeSet& s, int v) {
  NodeSet out;
  for (int u : s)
    if (u != v) out.push_back(u);
  return out;
}

NodeSet exogenous_blanket(const CiMeasure& m, int n, int i, const NodeSet& mb, double beta) {
  const int e = n + i;
  NodeSet pool = mb;
  pool.push_back(i);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  NodeSet out;
  while (!pool.empty()) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < pool.size(); ++t) {
      const double v = m.cmi(e, pool[t], out);
      if (v > best_value) {
        best_value = v;
        best = t;
      }
    }
    if (!(best_value > beta)) break;
    out.push_back(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  std::sort(out.begin(), out.end());
  const NodeSet snapshot = out;
  for (int k : snapshot) {
    if (k == i) continue;
    const NodeSet rest = without(out, k);
    if (m.cmi(e, k, rest) < beta) out = rest;
  }
  return out;
}

}  // namespace

IntersectionResult intersect_markov_blankets(const CiMeasure& augmented, int n, const MarkovBlankets& blankets,
                                             double beta, int threads) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (static_cast<int>(blankets.size()) != n || augmented.variables() < 2 * n)
    throw std::invalid_argument("intersect_markov_blankets: measure must cover 2n variables");
  IntersectionResult r;
  r.exogenous_blankets.resize(static_cast<std::size_t>(n));
  std::vector<std::vector<WeightedEdge>> per_node(static_cast<std::size_t>(n));
  auto one = [&](int i) {
    NodeSet mbe = exogenous_blanket(augmented, n, i, blankets[static_cast<std::size_t>(i)], beta);
    for (int l : mbe) {
      if (l == i) continue;
      per_node[static_cast<std::size_t>(i)].push_back({l, i, augmented.cmi(n + i, l, without(mbe, l))});
    }
    r.exogenous_blankets[static_cast<std::size_t>(i)] = std::move(mbe);
  };
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) one(i);
      });
  }
  for (auto& edges : per_node) r.edges.insert(r.edges.end(), edges.begin(), edges.end());
  return r;
}

IntersectionResult intersect_markov_blankets(const Dataset& d, const ExogenousData& e, const MarkovBlankets& blankets,
                                             double beta, int k) {
  std::vector<std::vector<double>> all = d.columns();
  all.insert(all.end(), e.columns.begin(), e.columns.end());
  KnnOptions options;
  options.k = k;
  const KnnMeasure m(std::move(all), options);
  return intersect_markov_blankets(m, static_cast<int>(d.cols()), blankets, beta);
}

Graph edges_to_graph(int n, const std::vector<WeightedEdge>& edges) {
  Graph g(n);
  for (const auto& e : edges) {
    if (g.has_directed(e.to, e.from)) throw std::invalid_argument("edges_to_graph: opposite edges");
    g.add_directed(e.from, e.to);
  }
  return g;
}

}  // namespace eembi
