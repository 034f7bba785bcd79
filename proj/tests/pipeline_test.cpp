#include <gtest/gtest.h>

#include "eembi/pipeline.hpp"
#include "eembi/random.hpp"
#include "eembi/simulate.hpp"
#include "oracles.hpp"

using namespace eembi;

namespace {

Graph undirected(int n, const std::vector<Edge>& edges) {
  Graph g(n);
  for (const auto& [a, b] : edges) g.add_undirected(a, b);
  return g;
}

/// Answers from a separating-set table; every other pair is dependent.
class TableMeasure final : public CiMeasure {
 public:
  TableMeasure(int n, std::vector<std::tuple<int, int, NodeSet>> independent) : n_(n), ind_(std::move(independent)) {}
  int variables() const override { return n_; }
  double cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override {
    const int a = std::min(x[0], y[0]), b = std::max(x[0], y[0]);
    NodeSet zs = z;
    std::sort(zs.begin(), zs.end());
    for (const auto& [p, q, s] : ind_)
      if (p == a && q == b && s == zs) return 0.0;
    return 1.0;
  }
  using CiMeasure::cmi;

 private:
  int n_;
  std::vector<std::tuple<int, int, NodeSet>> ind_;
};

}  // namespace

TEST(Method, ParseAndPrint) {
  EXPECT_EQ(parse_method("eembi"), Method::eembi);
  EXPECT_EQ(parse_method("eembi-pc"), Method::eembi_pc);
  EXPECT_EQ(parse_method("eembi_pc"), Method::eembi_pc);
  EXPECT_EQ(to_string(Method::eembi_pc), "eembi-pc");
  EXPECT_THROW(parse_method("pc"), std::invalid_argument);
}

TEST(PcVStructures, ColliderOracle) {
  const DSeparationOracle o(oracle::dag_from(3, {{0, 2}, {1, 2}}));
  EXPECT_EQ(pc_v_structures(undirected(3, {{0, 2}, {1, 2}}), o, 0.5), oracle::dag_from(3, {{0, 2}, {1, 2}}));
}

TEST(PcVStructures, ChainOracleOrientsNothing) {
  const DSeparationOracle o(oracle::dag_from(3, {{0, 1}, {1, 2}}));
  const Graph skel = undirected(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(pc_v_structures(skel, o, 0.5), skel);
}

TEST(PcVStructures, TriangleHasNoUnshieldedTriple) {
  const DSeparationOracle o(oracle::dag_from(3, {{0, 1}, {0, 2}, {1, 2}}));
  const Graph skel = undirected(3, {{0, 1}, {1, 2}, {0, 2}});
  PcTrace trace;
  EXPECT_EQ(pc_v_structures(skel, o, 0.5, &trace), skel);
  EXPECT_EQ(trace.separation_queries, 0U);
}

TEST(PcVStructures, UnseparatedPairIsNotOriented) {
  // Both endpoints stay dependent under every subset, so no separating set exists.
  const TableMeasure m(3, {});
  const Graph skel = undirected(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(pc_v_structures(skel, m, 0.5), skel);
}

TEST(PcVStructures, FirstWriterWinsOnConflict) {
  // Triples 0-1-2 and 1-2-3 both claim the edge 1-2: 0->1<-2 and 1->2<-3.
  const TableMeasure m(4, {{0, 2, {}}, {1, 3, {}}});
  PcTrace trace;
  const Graph g = pc_v_structures(undirected(4, {{0, 1}, {1, 2}, {2, 3}}), m, 0.5, &trace);
  EXPECT_EQ(trace.conflicts, 1);
  EXPECT_TRUE(g.has_directed(0, 1));
  EXPECT_TRUE(g.has_directed(2, 1));
  EXPECT_TRUE(g.has_directed(3, 2));
}

TEST(PcVStructures, SearchStaysInsideAdjacency) {
  // Every conditioning node must be adjacent to one of the two endpoints.
  class Spy final : public CiMeasure {
   public:
    explicit Spy(const Graph& skel) : skel_(skel) {}
    int variables() const override { return skel_.size(); }
    double cmi(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override {
      for (int v : z)
        if (!skel_.adjacent(x[0], v) && !skel_.adjacent(y[0], v)) outside = true;
      return z.size() == 1 ? 0.0 : 1.0;
    }
    using CiMeasure::cmi;
    mutable bool outside = false;

   private:
    const Graph& skel_;
  };
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph skel = skeleton(oracle::random_mixed_graph(8, 0.3, rng));
    const Spy spy(skel);
    PcTrace trace;
    pc_v_structures(skel, spy, 0.5, &trace);
    EXPECT_FALSE(spy.outside) << "trial " << trial;
  }
}

TEST(RepairCycles, DropsWeakestEdge) {
  std::vector<WeightedEdge> edges{{0, 1, 0.9}, {1, 2, 0.2}, {2, 0, 0.5}, {2, 3, 0.1}};
  EXPECT_EQ(repair_cycles(edges, 4), 1);
  EXPECT_EQ(edges.size(), 3U);
  for (const auto& e : edges) EXPECT_FALSE(e.from == 1 && e.to == 2);
  EXPECT_EQ(repair_cycles(edges, 4), 0);
}

TEST(RepairCycles, OppositePairIsTwoCycle) {
  std::vector<WeightedEdge> edges{{0, 1, 0.3}, {1, 0, 0.4}};
  EXPECT_EQ(repair_cycles(edges, 2), 1);
  ASSERT_EQ(edges.size(), 1U);
  EXPECT_EQ(edges[0].from, 1);
}

TEST(IsValidCpdag, Examples) {
  EXPECT_TRUE(is_valid_cpdag(dag_to_cpdag(oracle::dag_from(3, {{0, 2}, {1, 2}}))));
  EXPECT_TRUE(is_valid_cpdag(undirected(3, {{0, 1}, {1, 2}})));
  EXPECT_FALSE(is_valid_cpdag(oracle::dag_from(3, {{0, 1}, {1, 2}})));
}

TEST(OraclePipeline, ExactCpdagOnRandomDags) {
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + trial % 5;
    const Graph dag = random_dag(n, trial % 2 ? 0.4 : 0.2, static_cast<std::uint64_t>(trial + 500));
    const DSeparationOracle aug(augmented_graph(dag));
    const Graph truth = dag_to_cpdag(dag);
    const RunReport a = eembi::eembi(aug, n, 0.5, 0.5);
    const RunReport b = eembi_pc(aug, n, 0.5, 0.5);
    EXPECT_EQ(a.cpdag, truth) << "trial " << trial;
    EXPECT_EQ(b.cpdag, truth) << "trial " << trial;
    EXPECT_EQ(a.cycle_repairs, 0);
    EXPECT_EQ(b.vstructure_conflicts, 0);
    EXPECT_EQ(b.extension_repairs, 0);
  }
}

TEST(OraclePipeline, ColliderPc) {
  const Graph dag = oracle::dag_from(3, {{0, 2}, {1, 2}});
  const DSeparationOracle aug(augmented_graph(dag));
  EXPECT_EQ(eembi_pc(aug, 3, 0.5, 0.5).cpdag, dag);
}

TEST(DataPipeline, LinearChainIsUndirected) {
  const Sample s = sample(make_linear_scm(oracle::dag_from(3, {{0, 1}, {1, 2}}), 2), 5000, 2);
  PipelineConfig cfg;
  cfg.seed = 1;
  const RunReport r = eembi::eembi(s.data, cfg);
  EXPECT_EQ(r.cpdag, undirected(3, {{0, 1}, {1, 2}}));
  EXPECT_TRUE(is_valid_cpdag(r.cpdag));
  EXPECT_EQ(r.blankets[1], (NodeSet{0, 2}));
  EXPECT_GT(r.cmi_queries, r.cmi_evaluations);
}

TEST(DataPipeline, IndependentColumnsAreEdgeless) {
  const Sample s = sample(make_linear_scm(Graph(4), 3), 5000, 3);
  for (Method m : {Method::eembi, Method::eembi_pc}) EXPECT_EQ(run(s.data, m).cpdag.edge_count(), 0U);
}

TEST(DataPipeline, AlwaysValidCpdagAndDeterministic) {
  const Scm scm = make_linear_scm(random_dag(6, 0.4, 4), 4);
  const Sample s = sample(scm, 2000, 4);
  PipelineConfig cfg;
  cfg.seed = 9;
  for (Method m : {Method::eembi, Method::eembi_pc}) {
    const RunReport a = run(s.data, m, cfg);
    EXPECT_TRUE(is_valid_cpdag(a.cpdag));
    cfg.threads = 3;
    EXPECT_EQ(run(s.data, m, cfg).cpdag, a.cpdag);
    cfg.threads = 1;
  }
}

TEST(DataPipeline, ResolvedBeta) {
  const Sample cont = sample(make_linear_scm(Graph(2), 1), 100, 1);
  const Sample disc = sample(make_discrete_scm(Graph(2), 1), 100, 1);
  PipelineConfig cfg;
  EXPECT_EQ(resolved_beta(cfg, cont.data), 0.05);
  EXPECT_EQ(resolved_beta(cfg, disc.data), 0.01);
  cfg.beta = 0.2;
  EXPECT_EQ(resolved_beta(cfg, disc.data), 0.2);
}

TEST(RunManifest, RecordsConfigAndCounters) {
  const DSeparationOracle aug(augmented_graph(oracle::dag_from(3, {{0, 2}, {1, 2}})));
  const RunReport r = eembi_pc(aug, 3, 0.5, 0.5);
  PipelineConfig cfg;
  cfg.seed = 77;
  const std::string m = run_manifest(cfg, r, {{"input", "x.csv"}});
  for (const char* key : {"\"method\"", "\"eembi-pc\"", "\"seed\"", "77", "\"cycle_repairs\"", "\"vstructure_conflicts\"",
                          "\"timings\"", "\"input\"", "x.csv"})
    EXPECT_NE(m.find(key), std::string::npos) << key;
}
