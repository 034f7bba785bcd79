#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "eembi/cmi.hpp"
#include "eembi/graph.hpp"

namespace eembi {

/**
 * Conditional dependence measure over a fixed set of variables.
 *
 * The learning stages only ever ask for I(X; Y | Z) and compare it with a
 * threshold, so anything shaped like a CMI can drive them: the kNN estimator
 * on data, or a d-separation oracle on a known graph.
 *
 * Stages that need exogenous variables use the augmented layout: variables
 * 0..n-1 are the endogenous columns and n+i is the exogenous partner of i.
 */
class CiMeasure {
 public:
  virtual ~CiMeasure() = default;
  virtual int variables() const = 0;
  virtual double cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const = 0;

  double cmi(int x, int y, const NodeSet& z) const { return cmi(NodeSet{x}, NodeSet{y}, z); }
};

/// kNN-CMI over owned columns.
class KnnMeasure final : public CiMeasure {
 public:
  KnnMeasure(std::vector<std::vector<double>> columns, KnnOptions options = {})
      : estimator_(std::move(columns), options) {}
  explicit KnnMeasure(const Dataset& d, KnnOptions options = {}) : estimator_(d, options) {}

  int variables() const override { return static_cast<int>(estimator_.variables()); }
  double cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override {
    return estimator_.estimate(x, y, z);
  }
  using CiMeasure::cmi;

 private:
  KnnCmiEstimator estimator_;
};

/// 0 when the sets are d-separated in the DAG, 1 otherwise.
class DSeparationOracle final : public CiMeasure {
 public:
  explicit DSeparationOracle(Graph dag);

  int variables() const override { return dag_.size(); }
  double cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override;
  using CiMeasure::cmi;

  const Graph& dag() const noexcept { return dag_; }

 private:
  Graph dag_;
};

/// DAG over 2n nodes: the input DAG plus an exogenous parent n+i -> i per node.
Graph augmented_graph(const Graph& dag);

/**
 * Wraps a measure with an evaluation counter and a memo table. Queries are
 * keyed with X and Y exchanged into canonical order, which is exact for the
 * estimators here (both are symmetric in X and Y).
 */
class CachedMeasure final : public CiMeasure {
 public:
  explicit CachedMeasure(const CiMeasure& inner, bool memoize = true) : inner_(inner), memoize_(memoize) {}

  int variables() const override { return inner_.variables(); }
  double cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override;
  using CiMeasure::cmi;

  /// Calls made to this wrapper.
  std::size_t queries() const noexcept { return queries_.load(); }
  /// Calls forwarded to the wrapped measure.
  std::size_t evaluations() const noexcept { return evaluations_.load(); }

 private:
  using Key = std::tuple<NodeSet, NodeSet, NodeSet>;
  const CiMeasure& inner_;
  bool memoize_;
  mutable std::mutex mutex_;
  mutable std::map<Key, double> memo_;
  mutable std::atomic<std::size_t> queries_{0};
  mutable std::atomic<std::size_t> evaluations_{0};
};

}  // namespace eembi
