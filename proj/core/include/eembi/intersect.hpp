#pragma once

#include <vector>

#include "eembi/ci.hpp"
#include "eembi/data.hpp"
#include "eembi/exo.hpp"
#include "eembi/mb.hpp"

namespace eembi {

/// Learned edge from -> to with the CMI that kept it.
struct WeightedEdge {
  int from;
  int to;
  /// I(e_to; x_from | MBe_to \ {from}) on the final exogenous blanket.
  double strength;

  auto operator<=>(const WeightedEdge&) const = default;
};

struct IntersectionResult {
  /// Sorted by (to, from). Opposite edges between one pair can both appear.
  std::vector<WeightedEdge> edges;
  /// Exogenous blanket of each node; usually holds the node itself.
  MarkovBlankets exogenous_blankets;
};

/**
 * For each node i, grows the exogenous blanket of e_i from the pool
 * MB_i + {i}: add the x_j with the largest I(e_i; x_j | MBe) while it exceeds
 * beta, then drop members k != i with I(e_i; x_k | MBe \ {k}) < beta in
 * ascending order. Every member l != i becomes an edge l -> i.
 *
 * The measure uses the augmented layout: x_j is variable j and e_i is n + i.
 */
IntersectionResult intersect_markov_blankets(const CiMeasure& augmented, int n, const MarkovBlankets& blankets,
                                             double beta, int threads = 1);

/// kNN form over the dataset and matched exogenous columns.
IntersectionResult intersect_markov_blankets(const Dataset& d, const ExogenousData& e, const MarkovBlankets& blankets,
                                             double beta, int k = 5);

/// Directed graph of the edges. Throws std::invalid_argument if two edges are
/// opposite, since the graph cannot hold both.
Graph edges_to_graph(int n, const std::vector<WeightedEdge>& edges);

}  // namespace eembi
