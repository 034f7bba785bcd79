#include "eembi/mb.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

namespace eembi {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

NodeSet without(const NodeSet& s, int v) {
  NodeSet out;
  out.reserve(s.size());
  for (int u : s)
    if (u != v) out.push_back(u);
  return out;
}

}  // namespace

NodeSet forward_phase(const CiMeasure& m, int target, int n, double alpha) {
  check_alpha(alpha);
  NodeSet pool;
  for (int j = 0; j < n; ++j)
    if (j != target) pool.push_back(j);
  NodeSet cmb;
  while (!pool.empty()) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < pool.size(); ++t) {
      const double v = m.cmi(target, pool[t], cmb);
      if (v > best_value) {
        best_value = v;
        best = t;
      }
    }
    if (!(best_value > alpha)) break;
    cmb.push_back(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  std::sort(cmb.begin(), cmb.end());
  return cmb;
}

NodeSet backward_phase(const CiMeasure& m, int target, NodeSet cmb, double alpha) {
  std::sort(cmb.begin(), cmb.end());
  const NodeSet snapshot = cmb;
  for (int j : snapshot) {
    const NodeSet rest = without(cmb, j);
    if (m.cmi(target, j, rest) < alpha) cmb = rest;
  }
  return cmb;
}

MarkovBlankets symmetry_check(const MarkovBlankets& blankets) {
  const int n = static_cast<int>(blankets.size());
  MarkovBlankets out(blankets.size());
  for (int i = 0; i < n; ++i) {
    for (int j : blankets[static_cast<std::size_t>(i)]) {
      if (j < 0 || j >= n) throw std::invalid_argument("symmetry_check: node out of range");
      const auto& other = blankets[static_cast<std::size_t>(j)];
      if (std::find(other.begin(), other.end(), i) != other.end()) out[static_cast<std::size_t>(i)].push_back(j);
    }
    std::sort(out[static_cast<std::size_t>(i)].begin(), out[static_cast<std::size_t>(i)].end());
  }
  return out;
}

MarkovBlankets improved_iamb(const CiMeasure& m, int n, double alpha, int threads) {
  check_alpha(alpha);
  if (n < 0 || n > m.variables()) throw std::invalid_argument("improved_iamb: bad node count");
  MarkovBlankets raw(static_cast<std::size_t>(n));
  auto one = [&](int i) { raw[static_cast<std::size_t>(i)] = backward_phase(m, i, forward_phase(m, i, n, alpha), alpha); };
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
  return symmetry_check(raw);
}

MarkovBlankets improved_iamb(const Dataset& d, double alpha, int k) {
  KnnOptions options;
  options.k = k;
  const KnnMeasure m(d, options);
  return improved_iamb(m, static_cast<int>(d.cols()), alpha);
}

MarkovBlankets true_markov_blankets(const Graph& dag) {
  const int n = dag.size();
  MarkovBlankets out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    NodeSet s = dag.parents(i);
    for (int c : dag.children(i)) {
      s.push_back(c);
      for (int p : dag.parents(c))
        if (p != i) s.push_back(p);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    out[static_cast<std::size_t>(i)] = std::move(s);
  }
  return out;
}

}  // namespace eembi
