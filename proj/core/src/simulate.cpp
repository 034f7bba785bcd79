#include "eembi/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eembi/random.hpp"

namespace eembi {

Graph random_dag(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_dag: n must be positive");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("random_dag: edge_prob must be in [0,1]");
  Rng rng(seed);
  const std::vector<int> order = rng.permutation(n);
  Graph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.uniform() < edge_prob) g.add_directed(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
  return g;
}

Scm make_linear_scm(const Graph& dag, std::uint64_t seed, NoiseKind noise) {
  if (!is_acyclic(dag) || dag.has_undirected_edges()) throw std::invalid_argument("make_linear_scm: need a DAG");
  Rng rng(seed);
  Scm scm;
  scm.dag = dag;
  scm.mechanism = Mechanism::linear_gaussian;
  scm.noise_kind = noise;
  scm.seed = seed;
  const int n = dag.size();
  for (int i = 0; i < n; ++i) {
    std::vector<double> w;
    for (std::size_t t = 0; t < dag.parents(i).size(); ++t) {
      const double mag = rng.uniform(0.3, 1.0);
      w.push_back(rng.uniform() < 0.5 ? -mag : mag);
    }
    scm.weights.push_back(std::move(w));
    scm.noise.push_back(rng.uniform(0.5, 1.0));
  }
  return scm;
}

namespace {

std::vector<double> dirichlet_row(Rng& rng, int arity) {
  std::vector<double> row(static_cast<std::size_t>(arity));
  double total = 0.0;
  for (auto& v : row) total += (v = rng.exponential());
  for (auto& v : row) v /= total;
  return row;
}

bool row_ok(const std::vector<double>& row, const std::vector<std::vector<double>>& earlier, double margin) {
  for (double v : row)
    if (v < margin) return false;
  for (const auto& other : earlier) {
    double d = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) d = std::max(d, std::abs(row[t] - other[t]));
    if (d < margin) return false;
  }
  return true;
}

std::size_t parent_configs(const Scm& scm, int i) {
  std::size_t c = 1;
  for (int p : scm.dag.parents(i)) c *= static_cast<std::size_t>(scm.arity[static_cast<std::size_t>(p)]);
  return c;
}

// Row of cpt[i] for the parent values in `x` (indexed by node).
template <typename Values>
std::size_t config_of(const Scm& scm, int i, const Values& x) {
  std::size_t r = 0;
  for (int p : scm.dag.parents(i))
    r = r * static_cast<std::size_t>(scm.arity[static_cast<std::size_t>(p)]) +
        static_cast<std::size_t>(x[static_cast<std::size_t>(p)]);
  return r;
}

}  // namespace

Scm make_discrete_scm(const Graph& dag, std::uint64_t seed, const DiscreteScmOptions& options) {
  if (!is_acyclic(dag) || dag.has_undirected_edges()) throw std::invalid_argument("make_discrete_scm: need a DAG");
  if (options.min_arity < 2 || options.max_arity < options.min_arity)
    throw std::invalid_argument("make_discrete_scm: bad arity range");
  const int n = dag.size();
  Rng rng(seed);
  Scm scm;
  for (int attempt = 0; attempt < std::max(1, options.max_attempts); ++attempt) {
    scm = Scm{};
    scm.dag = dag;
    scm.mechanism = Mechanism::discrete_cpt;
    scm.seed = seed;
    for (int i = 0; i < n; ++i)
      scm.arity.push_back(options.min_arity +
                          static_cast<int>(rng.below(static_cast<std::uint64_t>(options.max_arity - options.min_arity + 1))));
    for (int i = 0; i < n; ++i) {
      const int a = scm.arity[static_cast<std::size_t>(i)];
      // An unreachable margin would loop forever; relax it to what fits.
      const double margin = std::min(options.margin, 0.5 / a);
      std::vector<std::vector<double>> rows;
      for (std::size_t r = 0; r < parent_configs(scm, i); ++r) {
        std::vector<double> row = dirichlet_row(rng, a);
        for (int tries = 0; !row_ok(row, rows, margin) && tries < 100000; ++tries) row = dirichlet_row(rng, a);
        rows.push_back(std::move(row));
      }
      scm.cpt.push_back(std::move(rows));
    }
    if (n > options.audit_max_nodes || faithfulness_audit(scm) == 0) return scm;
  }
  return scm;
}

Scm final_test_scm() {
  Graph g(3);
  g.add_directed(0, 2);
  g.add_directed(1, 2);
  Scm scm;
  scm.dag = g;
  scm.mechanism = Mechanism::functional;
  return scm;
}

Sample sample(const Scm& scm, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("sample: need at least one row");
  const int n = scm.dag.size();
  const auto order = topological_order(scm.dag);
  if (!order) throw std::invalid_argument("sample: graph has a cycle");
  Rng rng(seed);
  std::vector<std::vector<double>> x(static_cast<std::size_t>(n), std::vector<double>(m));
  std::vector<std::vector<double>> e(static_cast<std::size_t>(n), std::vector<double>(m));
  auto draw = [&]() {
    switch (scm.mechanism) {
      case Mechanism::discrete_cpt: return rng.uniform();
      case Mechanism::functional: return rng.normal();
      case Mechanism::linear_gaussian: break;
    }
    switch (scm.noise_kind) {
      case NoiseKind::laplace: return rng.laplace();
      case NoiseKind::uniform: return std::sqrt(3.0) * rng.uniform(-1.0, 1.0);
      case NoiseKind::gaussian: break;
    }
    return rng.normal();
  };
  std::vector<double> row(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < m; ++r) {
    for (int i : *order) {
      const auto iu = static_cast<std::size_t>(i);
      const double ei = draw();
      e[iu][r] = ei;
      double v = 0.0;
      if (scm.mechanism == Mechanism::linear_gaussian) {
        const NodeSet pa = scm.dag.parents(i);
        for (std::size_t t = 0; t < pa.size(); ++t) v += scm.weights[iu][t] * row[static_cast<std::size_t>(pa[t])];
        v += scm.noise[iu] * ei;
      } else if (scm.mechanism == Mechanism::discrete_cpt) {
        const auto& probs = scm.cpt[iu][config_of(scm, i, row)];
        double acc = 0.0;
        v = static_cast<double>(probs.size() - 1);
        for (std::size_t t = 0; t < probs.size(); ++t) {
          acc += probs[t];
          if (ei < acc) {
            v = static_cast<double>(t);
            break;
          }
        }
      } else {
        if (i == 0) v = 3.0 * ei + 1.0;
        else if (i == 1) v = ei * ei;
        else v = 10.0 * row[1] - 2.0 * row[0] + 3.0 * ei + 5.0;
      }
      row[iu] = v;
      x[iu][r] = v;
    }
  }
  std::vector<std::string> names;
  if (scm.mechanism == Mechanism::functional) names = {"d", "t", "s"};
  else
    for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  const ColumnKind kind = scm.mechanism == Mechanism::discrete_cpt ? ColumnKind::discrete : ColumnKind::continuous;
  return {Dataset(std::move(names), std::vector<ColumnKind>(static_cast<std::size_t>(n), kind), std::move(x)),
          std::move(e)};
}

JointTable joint_table(const Scm& scm) {
  if (scm.mechanism != Mechanism::discrete_cpt) throw std::invalid_argument("joint_table: discrete SCMs only");
  const int n = scm.dag.size();
  std::size_t total = 1;
  for (int a : scm.arity) total *= static_cast<std::size_t>(a);
  std::vector<double> mass(total);
  std::vector<int> value(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rest = c;
    for (int v = n - 1; v >= 0; --v) {
      const auto a = static_cast<std::size_t>(scm.arity[static_cast<std::size_t>(v)]);
      value[static_cast<std::size_t>(v)] = static_cast<int>(rest % a);
      rest /= a;
    }
    double p = 1.0;
    for (int i = 0; i < n; ++i)
      p *= scm.cpt[static_cast<std::size_t>(i)][config_of(scm, i, value)][static_cast<std::size_t>(value[static_cast<std::size_t>(i)])];
    mass[c] = p;
  }
  double sum = 0.0;
  for (double p : mass) sum += p;
  for (double& p : mass) p /= sum;
  return JointTable(scm.arity, std::move(mass));
}

int faithfulness_audit(const Scm& scm, double tol) {
  const JointTable t = joint_table(scm);
  const int n = scm.dag.size();
  int disagreements = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      NodeSet others;
      for (int v = 0; v < n; ++v)
        if (v != a && v != b) others.push_back(v);
      for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
        NodeSet z;
        for (std::size_t t2 = 0; t2 < others.size(); ++t2)
          if (mask >> t2 & 1U) z.push_back(others[t2]);
        const bool dependent = exact_cmi_discrete(t, {a}, {b}, z) > tol;
        if (dependent == d_separated(scm.dag, {a}, {b}, z)) ++disagreements;
      }
    }
  }
  return disagreements;
}

DSeparationOracle oracle_ci(const Scm& scm) { return DSeparationOracle(scm.dag); }

DSeparationOracle augmented_oracle_ci(const Scm& scm) { return DSeparationOracle(augmented_graph(scm.dag)); }

}  // namespace eembi
