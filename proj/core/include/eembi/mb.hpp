#pragma once

#include <vector>

#include "eembi/ci.hpp"
#include "eembi/data.hpp"
#include "eembi/graph.hpp"

namespace eembi {

/// blankets[i] holds the candidate Markov blanket of node i, sorted.
using MarkovBlankets = std::vector<NodeSet>;

/// Greedy growth: add the candidate with the largest I(x_i; x_j | CMB) while it
/// exceeds alpha. Ties go to the lowest index.
NodeSet forward_phase(const CiMeasure& m, int target, int n, double alpha);

/// Drops j from cmb, in ascending order with immediate update, when
/// I(x_i; x_j | cmb \ {j}) < alpha.
NodeSet backward_phase(const CiMeasure& m, int target, NodeSet cmb, double alpha);

/// Keeps j in CMB_i only when i is in CMB_j, judged against the input.
MarkovBlankets symmetry_check(const MarkovBlankets& blankets);

/// Forward and backward phase for nodes 0..n-1 of the measure, then one
/// symmetry check. threads > 1 runs nodes concurrently with the same result.
MarkovBlankets improved_iamb(const CiMeasure& m, int n, double alpha, int threads = 1);

MarkovBlankets improved_iamb(const Dataset& d, double alpha, int k = 5);

/// Parents, children and spouses of every node of a DAG.
MarkovBlankets true_markov_blankets(const Graph& dag);

}  // namespace eembi
