#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eembi/ci.hpp"
#include "eembi/cmi.hpp"
#include "eembi/random.hpp"
#include "kdtree.hpp"
#include "oracles.hpp"

using namespace eembi;

namespace {

using Columns = std::vector<std::vector<double>>;

Columns gaussian_pair(double rho, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Columns c(2, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.normal();
    c[0][i] = a;
    c[1][i] = rho * a + std::sqrt(1 - rho * rho) * rng.normal();
  }
  return c;
}

Columns xor_triple(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Columns c(3, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    c[0][i] = static_cast<double>(rng.below(2));
    c[1][i] = static_cast<double>(rng.below(2));
    c[2][i] = static_cast<double>(static_cast<int>(c[0][i]) ^ static_cast<int>(c[1][i]));
  }
  return c;
}

double ref_knn_cmi(const Columns& c, const NodeSet& x, const NodeSet& y, const NodeSet& z, int k) {
  const std::size_t n = c[0].size();
  auto dist = [&](std::size_t a, std::size_t b, const NodeSet& vars) {
    double d = 0;
    for (int v : vars) d = std::max(d, std::abs(c[static_cast<std::size_t>(v)][a] - c[static_cast<std::size_t>(v)][b]));
    return d;
  };
  NodeSet all = x, xz = x, yz = y;
  all.insert(all.end(), y.begin(), y.end());
  all.insert(all.end(), z.begin(), z.end());
  xz.insert(xz.end(), z.begin(), z.end());
  yz.insert(yz.end(), z.begin(), z.end());
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d.push_back(dist(i, j, all));
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    const double rho = d[static_cast<std::size_t>(k - 1)];
    std::size_t kt = 0, nxz = 0, nyz = 0, nz = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && dist(i, j, all) <= rho) ++kt;
      if (dist(i, j, xz) <= rho) ++nxz;
      if (dist(i, j, yz) <= rho) ++nyz;
      if (z.empty() || dist(i, j, z) <= rho) ++nz;
    }
    sum += digamma(static_cast<double>(kt)) + digamma(static_cast<double>(nz)) - digamma(static_cast<double>(nxz)) -
           digamma(static_cast<double>(nyz));
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TEST(Digamma, KnownValues) {
  constexpr double euler = 0.57721566490153286;
  EXPECT_NEAR(digamma(1.0), -euler, 1e-10);
  EXPECT_NEAR(digamma(2.0), 1 - euler, 1e-10);
  EXPECT_NEAR(digamma(0.5), -euler - 2 * std::numbers::ln2, 1e-10);
  EXPECT_NEAR(digamma(10.0), 2.251752589066721, 1e-10);
  for (double x = 1.0; x < 50.0; x += 0.37) EXPECT_NEAR(digamma(x + 1) - digamma(x), 1 / x, 1e-11);
}

TEST(KdTree, MatchesBruteForce) {
  Rng rng(3);
  const std::size_t n = 400, dim = 3;
  std::vector<double> pts(n * dim);
  for (auto& v : pts) v = std::round(rng.uniform() * 6) / 2;  // heavy ties
  detail::KdTree tree(pts, dim, 4);
  for (std::size_t q = 0; q < n; q += 7) {
    std::vector<double> d;
    for (std::size_t j = 0; j < n; ++j) d.push_back(detail::chebyshev(&pts[q * dim], &pts[j * dim], dim));
    std::sort(d.begin(), d.end());
    for (std::size_t k : {1U, 2U, 6U, 30U}) {
      const double r = tree.kth_distance(&pts[q * dim], k);
      EXPECT_EQ(r, d[k - 1]);
      const auto expect = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), r) - d.begin());
      EXPECT_EQ(tree.count_within(&pts[q * dim], r), expect);
      std::vector<std::uint32_t> got;
      tree.collect_within(&pts[q * dim], r, got);
      EXPECT_EQ(got.size(), expect);
    }
  }
}

TEST(KnnCmi, MatchesReferenceFormula) {
  Columns c = gaussian_pair(0.6, 300, 5);
  Rng rng(9);
  c.emplace_back();
  c.emplace_back();
  for (std::size_t i = 0; i < 300; ++i) {
    c[2].push_back(c[1][i] + rng.normal());
    c[3].push_back(static_cast<double>(rng.below(3)));
  }
  for (bool index : {false, true}) {
    const KnnCmiEstimator est(c, {.k = 5, .use_index = index});
    EXPECT_NEAR(est.estimate({0}, {2}, {1}), ref_knn_cmi(c, {0}, {2}, {1}, 5), 1e-12);
    EXPECT_NEAR(est.estimate({0}, {1}, {}), ref_knn_cmi(c, {0}, {1}, {}, 5), 1e-12);
    EXPECT_NEAR(est.estimate({3}, {0, 1}, {2}), ref_knn_cmi(c, {3}, {0, 1}, {2}, 5), 1e-12);
  }
}

TEST(KnnCmi, IndexedSearchIsBitIdentical) {
  const Columns c = xor_triple(1500, 4);
  const KnnCmiEstimator brute(c, {.k = 5, .use_index = false});
  const KnnCmiEstimator tree(c, {.k = 5, .use_index = true, .threads = 3});
  EXPECT_EQ(brute.estimate({0}, {1}, {2}), tree.estimate({0}, {1}, {2}));
  EXPECT_EQ(brute.estimate({0}, {2}, {}), tree.estimate({0}, {2}, {}));
  const Columns g = gaussian_pair(0.5, 1500, 8);
  EXPECT_EQ(KnnCmiEstimator(g, {.use_index = false}).estimate({0}, {1}, {}),
            KnnCmiEstimator(g, {.threads = 4}).estimate({0}, {1}, {}));
}

TEST(KnnCmi, IndependentUniform) {
  Rng rng(11);
  Columns c(2, std::vector<double>(2000));
  for (auto& col : c)
    for (auto& v : col) v = rng.uniform();
  EXPECT_LE(std::abs(KnnCmiEstimator(c).estimate({0}, {1}, {})), 0.05);
}

TEST(KnnCmi, GaussianCorrelation) {
  const double truth = -0.5 * std::log(1 - 0.64);
  EXPECT_NEAR(KnnCmiEstimator(gaussian_pair(0.8, 5000, 21)).estimate({0}, {1}, {}), truth, 0.1);
}

TEST(KnnCmi, XorConditional) {
  const KnnCmiEstimator est(xor_triple(4000, 2));
  EXPECT_NEAR(est.estimate({0}, {1}, {2}), std::numbers::ln2, 0.1);
  EXPECT_LE(std::abs(est.estimate({0}, {1}, {})), 0.05);
}

TEST(KnnCmi, DuplicateColumnIsStronglyDependent) {
  Columns c = gaussian_pair(0.0, 1000, 6);
  c[1] = c[0];
  EXPECT_GT(KnnCmiEstimator(c).estimate({0}, {1}, {}), 1.0);
}

TEST(KnnCmi, ExactlySymmetric) {
  Columns c = gaussian_pair(0.4, 800, 12);
  c.push_back(xor_triple(800, 1)[2]);
  const KnnCmiEstimator est(c);
  EXPECT_EQ(est.estimate({0}, {1}, {}), est.estimate({1}, {0}, {}));
  EXPECT_EQ(est.estimate({0}, {2}, {1}), est.estimate({2}, {0}, {1}));
}

TEST(KnnCmi, InvalidQueries) {
  const KnnCmiEstimator est(gaussian_pair(0.1, 10, 1), {.k = 5});
  EXPECT_THROW(est.estimate({}, {1}, {}), std::invalid_argument);
  EXPECT_THROW(est.estimate({0}, {}, {}), std::invalid_argument);
  EXPECT_THROW(est.estimate({0}, {0}, {}), std::invalid_argument);
  EXPECT_THROW(est.estimate({0}, {5}, {}), std::invalid_argument);
  const KnnCmiEstimator big_k(gaussian_pair(0.1, 10, 1), {.k = 10});
  EXPECT_THROW(big_k.estimate({0}, {1}, {}), std::invalid_argument);
}

TEST(KnnCmi, ChainInformationDecreasesWithDistance) {
  Rng rng(17);
  const std::size_t n = 5000;
  Columns c(4, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    c[0][i] = rng.normal();
    for (std::size_t j = 1; j < 4; ++j) c[j][i] = 0.9 * c[j - 1][i] + 0.6 * rng.normal();
  }
  const KnnCmiEstimator est(c);
  const double i1 = est.estimate({0}, {1}, {});
  const double i2 = est.estimate({0}, {2}, {});
  const double i3 = est.estimate({0}, {3}, {});
  EXPECT_GT(i1, i2);
  EXPECT_GT(i2, i3);
}

TEST(KnnCmi, DiscreteConvergesToEmpiricalJoint) {
  Rng rng(23);
  const std::size_t n = 10000;
  std::vector<double> a(n), b(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = rng.uniform() < 0.4 ? 1 : 0;
    a[i] = rng.uniform() < (z[i] > 0 ? 0.8 : 0.3) ? 1 : 0;
    b[i] = rng.uniform() < (a[i] > 0 ? 0.7 : 0.2) + 0.1 * z[i] ? 1 : 0;
  }
  const Dataset d({"a", "b", "z"}, {ColumnKind::discrete, ColumnKind::discrete, ColumnKind::discrete}, {a, b, z});
  const JointTable t = empirical_joint(d, {0, 1, 2});
  EXPECT_NEAR(knn_cmi(d, {{0}, {1}, {2}, 5}), exact_cmi_discrete(t, {0}, {1}, {2}), 0.05);
  EXPECT_NEAR(knn_cmi(d, {{0}, {2}, {}, 5}), exact_cmi_discrete(t, {0}, {2}, {}), 0.05);
  EXPECT_NEAR(mutual_information(d, {1}, {2}), exact_cmi_discrete(t, {1}, {2}, {}), 0.05);
}

TEST(ExactCmi, Examples) {
  const JointTable bits({2, 2}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(exact_cmi_discrete(bits, {0}, {1}, {}), 0.0, 1e-15);
  std::vector<double> mass(8, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) mass[static_cast<std::size_t>(x * 4 + y * 2 + (x ^ y))] = 0.25;
  const JointTable xr({2, 2, 2}, mass);
  EXPECT_NEAR(exact_cmi_discrete(xr, {0}, {1}, {2}), std::numbers::ln2, 1e-12);
  EXPECT_NEAR(exact_cmi_discrete(xr, {0}, {1}, {}), 0.0, 1e-12);
}

TEST(ExactCmi, ChainTablesAreConditionallyIndependent) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const double px = rng.uniform();
    const double py[2] = {rng.uniform(), rng.uniform()};
    const double pz[2] = {rng.uniform(), rng.uniform()};
    std::vector<double> mass(8);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
          mass[static_cast<std::size_t>(x * 4 + y * 2 + z)] =
              (x ? px : 1 - px) * (y ? py[x] : 1 - py[x]) * (z ? pz[y] : 1 - pz[y]);
    const JointTable t({2, 2, 2}, mass);
    EXPECT_NEAR(exact_cmi_discrete(t, {0}, {2}, {1}), 0.0, 1e-12);
  }
}

TEST(ExactCmi, RejectsBadTables) {
  EXPECT_THROW(JointTable({2}, {0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(JointTable({2}, {1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(JointTable({2, 2}, {1.0}), std::invalid_argument);
}

TEST(CachedMeasure, MemoizesCanonicalQueries) {
  const DSeparationOracle oracle(oracle::dag_from(3, {{0, 1}, {1, 2}}));
  const CachedMeasure cached(oracle);
  EXPECT_EQ(cached.cmi(0, 2, {}), 1.0);
  EXPECT_EQ(cached.cmi(2, 0, {}), 1.0);
  EXPECT_EQ(cached.cmi(0, 2, {1}), 0.0);
  EXPECT_EQ(cached.queries(), 3U);
  EXPECT_EQ(cached.evaluations(), 2U);
}

TEST(AugmentedGraph, AddsExogenousParents) {
  const Graph g = augmented_graph(oracle::dag_from(2, {{0, 1}}));
  EXPECT_EQ(g.size(), 4);
  EXPECT_TRUE(g.has_directed(2, 0));
  EXPECT_TRUE(g.has_directed(3, 1));
  EXPECT_TRUE(g.has_directed(0, 1));
}
