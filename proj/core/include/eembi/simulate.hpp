#pragma once

#include <cstdint>
#include <vector>

#include "eembi/ci.hpp"
#include "eembi/cmi.hpp"
#include "eembi/data.hpp"
#include "eembi/graph.hpp"

namespace eembi {

/// Random DAG: a uniformly random node order, with each forward pair joined
/// independently with probability edge_prob.
Graph random_dag(int n, double edge_prob, std::uint64_t seed);

enum class Mechanism { linear_gaussian, discrete_cpt, functional };

enum class NoiseKind { gaussian, laplace, uniform };

/**
 * Structural causal model over dag.
 *
 * linear_gaussian: x_i = sum_t weights[i][t] * x_{parents_i[t]} + noise[i] * e_i,
 *   with e_i drawn from `noise_kind` at zero mean and unit variance.
 * discrete_cpt: cpt[i][r] is the distribution of x_i given parent
 *   configuration r (parents ascending, first parent slowest); e_i is the
 *   uniform draw used for inverse-CDF sampling.
 * functional: the three-node fixture d = 3 e_d + 1, t = e_t^2,
 *   s = 10 t - 2 d + 3 e_s + 5 with standard normal e.
 */
struct Scm {
  Graph dag;
  Mechanism mechanism = Mechanism::linear_gaussian;
  NoiseKind noise_kind = NoiseKind::gaussian;
  std::vector<std::vector<double>> weights;
  std::vector<double> noise;
  std::vector<int> arity;
  std::vector<std::vector<std::vector<double>>> cpt;
  std::uint64_t seed = 0;
};

/// Weights uniform on +-[0.3, 1.0], noise scales uniform on [0.5, 1.0].
Scm make_linear_scm(const Graph& dag, std::uint64_t seed, NoiseKind noise = NoiseKind::gaussian);

struct DiscreteScmOptions {
  int min_arity = 2;
  int max_arity = 3;
  /// Rows are redrawn while an entry is below this, or while two rows of one
  /// node are this close in max-abs distance.
  double margin = 0.05;
  /// Models with at most this many nodes are rejected and redrawn when exact
  /// CMI disagrees with d-separation on any query.
  int audit_max_nodes = 6;
  int max_attempts = 50;
};

Scm make_discrete_scm(const Graph& dag, std::uint64_t seed, const DiscreteScmOptions& options = {});

/// The three-node nonlinear fixture (d, t, s) with d -> s <- t.
Scm final_test_scm();

struct Sample {
  Dataset data;
  /// exogenous[i][r] is the draw of e_i behind row r.
  std::vector<std::vector<double>> exogenous;
};

/// Ancestral sampling of m rows.
Sample sample(const Scm& scm, std::size_t m, std::uint64_t seed);

/// Exact joint distribution of a discrete SCM.
JointTable joint_table(const Scm& scm);

/// Number of pair/conditioning-set queries on which exact CMI (> tol means
/// dependent) and d-separation disagree. Discrete SCMs only.
int faithfulness_audit(const Scm& scm, double tol = 1e-10);

/// d-separation oracle over the endogenous DAG.
DSeparationOracle oracle_ci(const Scm& scm);
/// d-separation oracle over the DAG with exogenous parents (2n variables).
DSeparationOracle augmented_oracle_ci(const Scm& scm);

}  // namespace eembi
