#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eembi/ci.hpp"
#include "eembi/data.hpp"
#include "eembi/exo.hpp"
#include "eembi/graph.hpp"
#include "eembi/ica.hpp"
#include "eembi/intersect.hpp"
#include "eembi/mb.hpp"

namespace eembi {

enum class Method { eembi, eembi_pc };

std::string to_string(Method m);
/// Accepts "eembi" and "eembi-pc" (or "eembi_pc"); throws std::invalid_argument otherwise.
Method parse_method(const std::string& text);

struct PipelineConfig {
  double alpha = 0.01;
  /// Unset means 0.01 for all-discrete data and 0.05 otherwise.
  std::optional<double> beta;
  int k = 5;
  std::uint64_t seed = 0;
  /// Estimated MI at or below this counts as zero when matching.
  double zero_eps = 0.01;
  double ica_tol = 1e-4;
  int ica_max_iter = 200;
  Contrast contrast = Contrast::logcosh;
  /// Worker threads inside the estimator; results do not depend on it.
  int threads = 1;
};

double resolved_beta(const PipelineConfig& cfg, const Dataset& d);

struct RunReport {
  Method method = Method::eembi;
  Graph cpdag;
  /// The repaired intersection DAG (eembi) or the extension used to finish
  /// an inconsistent PDAG (eembi_pc, only when repaired).
  Graph dag;
  MarkovBlankets blankets;
  MarkovBlankets exogenous_blankets;
  std::vector<WeightedEdge> edges;
  std::vector<int> permutation;
  std::vector<bool> ica_converged;
  double beta = 0.0;
  int cycle_repairs = 0;
  int vstructure_conflicts = 0;
  int extension_repairs = 0;
  std::size_t cmi_queries = 0;
  std::size_t cmi_evaluations = 0;
  /// Seconds per stage.
  std::map<std::string, double> timings;
};

/// Full run on data: ICA, matching, blankets, intersection, orientation.
RunReport run(const Dataset& d, Method method, const PipelineConfig& cfg = {});
RunReport eembi(const Dataset& d, const PipelineConfig& cfg = {});
RunReport eembi_pc(const Dataset& d, const PipelineConfig& cfg = {});

/// Runs on an augmented measure (x_j is j, e_i is n + i), e.g. a d-separation
/// oracle over augmented_graph(dag). No ICA or matching takes place.
RunReport run(const CiMeasure& augmented, int n, Method method, double alpha, double beta);
RunReport eembi(const CiMeasure& augmented, int n, double alpha, double beta);
RunReport eembi_pc(const CiMeasure& augmented, int n, double alpha, double beta);

/**
 * Deletes the weakest edge of some directed cycle until none is left, and
 * returns the number deleted. Opposite edges count as a cycle of length two.
 * Ties on strength go to the smallest (from, to).
 */
int repair_cycles(std::vector<WeightedEdge>& edges, int n);

struct PcTrace {
  int conflicts = 0;
  int oriented_triples = 0;
  std::size_t separation_queries = 0;
};

/**
 * Orients colliders on an undirected skeleton. Unshielded triples i - j - k
 * (i < k) are visited in order of (j, i, k). Subsets Z of
 * adj(i) + adj(k) - {i, j, k} are tried by size, then lexicographically; the
 * first with I(x_i; x_k | Z) < alpha is taken as a separating set, and the
 * triple is oriented i -> j <- k. An edge keeps the first orientation given
 * to it; a later contrary one is counted as a conflict.
 */
Graph pc_v_structures(const Graph& skeleton, const CiMeasure& m, double alpha, PcTrace* trace = nullptr);

/// True iff g is the CPDAG of some DAG.
bool is_valid_cpdag(const Graph& g);

/// JSON run manifest with the configuration, counters and stage timings.
std::string run_manifest(const PipelineConfig& cfg, const RunReport& report,
                         const std::map<std::string, std::string>& extra = {});

}  // namespace eembi
