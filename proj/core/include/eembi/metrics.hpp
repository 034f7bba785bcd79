#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eembi/graph.hpp"

namespace eembi {

/**
 * Square matrix of edge entries. For graphs: i->j sets A(i,j) = 1 only,
 * i-j sets both A(i,j) and A(j,i), no edge leaves both 0. Score matrices use
 * the same layout with real entries.
 */
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
  /// Throws MetricError unless values.size() == n * n.
  AdjacencyMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<double>& values() const noexcept { return a_; }

  bool is_binary() const;

  friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

AdjacencyMatrix to_adjacency(const Graph& g);
/// Throws MetricError on non-binary entries or a nonzero diagonal.
Graph from_adjacency(const AdjacencyMatrix& a);

/// Reads comma-separated 0/1 rows. A first row that is not numeric is taken
/// as a header. Throws IngestionError on malformed or non-square input.
AdjacencyMatrix read_adjacency_csv(std::istream& in, std::vector<std::string>* header = nullptr);
AdjacencyMatrix read_adjacency_csv(const std::filesystem::path& path, std::vector<std::string>* header = nullptr);

/// Writes integer entries, with a header row when names are given.
void write_adjacency_csv(std::ostream& out, const AdjacencyMatrix& a, const std::vector<std::string>& names = {});
void write_adjacency_csv(const std::filesystem::path& path, const AdjacencyMatrix& a,
                         const std::vector<std::string>& names = {});

/// Sum of |A(i,j) - B(i,j)|. Throws MetricError on a size mismatch.
int shd(const AdjacencyMatrix& a, const AdjacencyMatrix& b);
int shd(const Graph& a, const Graph& b);

/**
 * Average precision over the off-diagonal ordered pairs: thresholds run over
 * the distinct scores from high to low with ties grouped, and the area is
 * sum (R_t - R_{t-1}) P_t. Every pair is ranked, so recall reaches 1 at the
 * lowest threshold. Throws MetricError on a size mismatch, a non-binary
 * truth, or a truth with no edges.
 */
double aupr(const AdjacencyMatrix& scores, const AdjacencyMatrix& truth);
double aupr(const Graph& predicted, const Graph& truth);

/// Fraction of off-diagonal truth entries equal to 1.
double prevalence(const AdjacencyMatrix& truth);

struct MetricsRow {
  std::string dataset;
  std::string method;
  std::uint64_t seed = 0;
  int shd = 0;
  double aupr = 0.0;
  double runtime = 0.0;
};

std::string metrics_csv_header();
std::string to_csv(const MetricsRow& row);
std::string to_json(const MetricsRow& row);

}  // namespace eembi
