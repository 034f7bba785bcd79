#include "eembi/exo.hpp"

#include <stdexcept>

#include "eembi/cmi.hpp"

namespace eembi {

SampleMatrix to_matrix(const Dataset& d) {
  SampleMatrix x(static_cast<Eigen::Index>(d.rows()), static_cast<Eigen::Index>(d.cols()));
  for (std::size_t j = 0; j < d.cols(); ++j) {
    const auto col = d.column(j);
    for (std::size_t r = 0; r < d.rows(); ++r) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = col[r];
  }
  return x;
}

ExogenousData generate_exogenous(const Dataset& d, const IcaOptions& options) {
  const IcaResult ica = fast_ica(to_matrix(d), static_cast<int>(d.cols()), options);
  ExogenousData e;
  e.discretized = d.all_discrete();
  e.converged = ica.converged;
  e.columns.resize(d.cols());
  for (std::size_t j = 0; j < d.cols(); ++j) {
    auto& col = e.columns[j];
    col.resize(d.rows());
    for (std::size_t r = 0; r < d.rows(); ++r) {
      const double v = ica.sources(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
      col[r] = e.discretized ? (v > 0.0 ? 1.0 : 0.0) : v;
    }
  }
  return e;
}

CostMatrix build_cost_matrix(const Dataset& d, const ExogenousData& e, int k, double zero_eps) {
  const std::size_t n = d.cols();
  if (e.columns.size() != n) throw std::invalid_argument("build_cost_matrix: column counts differ");
  std::vector<std::vector<double>> all = d.columns();
  all.insert(all.end(), e.columns.begin(), e.columns.end());
  KnnOptions options;
  options.k = k;
  const KnnCmiEstimator est(std::move(all), options);
  CostMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double mi = est.estimate({static_cast<int>(i)}, {static_cast<int>(n + j)}, {});
      c(i, j) = mi <= zero_eps ? CostMatrix::infeasible : -mi;
    }
  }
  return c;
}

ExogenousData match_exogenous(const Dataset& d, const ExogenousData& e, int k, double zero_eps) {
  const Assignment a = solve_assignment(build_cost_matrix(d, e, k, zero_eps));
  ExogenousData out;
  out.matched = true;
  out.discretized = e.discretized;
  out.converged = e.converged;
  out.permutation = a.column_for_row;
  out.columns.reserve(e.columns.size());
  for (int j : a.column_for_row) out.columns.push_back(e.columns[static_cast<std::size_t>(j)]);
  return out;
}

std::vector<SwapViolation> audit_matching(const CostMatrix& cost, const std::vector<int>& column_for_row,
                                          double tolerance) {
  const std::size_t n = cost.size();
  if (column_for_row.size() != n) throw std::invalid_argument("audit_matching: size mismatch");
  std::vector<SwapViolation> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto ci = static_cast<std::size_t>(column_for_row[i]);
      const auto cj = static_cast<std::size_t>(column_for_row[j]);
      if (cost.blocked(i, cj) || cost.blocked(j, ci)) continue;
      // Costs are negated MI.
      const double kept = -(cost(i, ci) + cost(j, cj));
      const double swapped = -(cost(i, cj) + cost(j, ci));
      if (swapped > kept + tolerance) out.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return out;
}

}  // namespace eembi
