#include "eembi/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "eembi/data.hpp"
#include "eembi/error.hpp"

namespace eembi {

AdjacencyMatrix::AdjacencyMatrix(std::size_t n, std::vector<double> values) : n_(n), a_(std::move(values)) {
  if (a_.size() != n * n) throw MetricError("adjacency matrix: expected n*n entries");
}

bool AdjacencyMatrix::is_binary() const {
  return std::all_of(a_.begin(), a_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

AdjacencyMatrix to_adjacency(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.size());
  AdjacencyMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g.entry(static_cast<int>(i), static_cast<int>(j))) a(i, j) = 1.0;
  return a;
}

Graph from_adjacency(const AdjacencyMatrix& a) {
  if (!a.is_binary()) throw MetricError("adjacency matrix must be binary");
  const std::size_t n = a.size();
  Graph g(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) throw MetricError("adjacency matrix must have a zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool ij = a(i, j) == 1.0;
      const bool ji = a(j, i) == 1.0;
      if (ij && ji) g.add_undirected(static_cast<int>(i), static_cast<int>(j));
      else if (ij) g.add_directed(static_cast<int>(i), static_cast<int>(j));
      else if (ji) g.add_directed(static_cast<int>(j), static_cast<int>(i));
    }
  }
  return g;
}

namespace {

bool parse_number(const std::string& s, double& out) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (b == e) return false;
  const auto [ptr, ec] = std::from_chars(s.data() + b, s.data() + e, out);
  return ec == std::errc() && ptr == s.data() + e;
}

}  // namespace

AdjacencyMatrix read_adjacency_csv(std::istream& in, std::vector<std::string>* header) {
  const StringTable t = read_csv_table(in);
  // read_csv_table always consumes a first row as names; put it back when numeric.
  std::vector<std::vector<std::string>> rows;
  const std::size_t n = t.names.size();
  bool names_numeric = true;
  double tmp = 0.0;
  for (const auto& s : t.names)
    if (!parse_number(s, tmp)) names_numeric = false;
  const std::size_t data_rows = n == 0 ? 0 : t.columns.front().size();
  if (names_numeric) rows.push_back(t.names);
  else if (header) *header = t.names;
  for (std::size_t r = 0; r < data_rows; ++r) {
    std::vector<std::string> row(n);
    for (std::size_t c = 0; c < n; ++c) row[c] = t.columns[c][r];
    rows.push_back(std::move(row));
  }
  if (rows.size() != n) throw IngestionError("adjacency matrix must be square", rows.size(), n);
  AdjacencyMatrix a(n);
  const std::size_t offset = names_numeric ? 1 : 2;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double v = 0.0;
      if (!parse_number(rows[r][c], v)) throw IngestionError("adjacency entry is not a number", r + offset, c + 1);
      a(r, c) = v;
    }
  }
  return a;
}

AdjacencyMatrix read_adjacency_csv(const std::filesystem::path& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());
  return read_adjacency_csv(in, header);
}

void write_adjacency_csv(std::ostream& out, const AdjacencyMatrix& a, const std::vector<std::string>& names) {
  const std::size_t n = a.size();
  if (!names.empty()) {
    if (names.size() != n) throw std::invalid_argument("write_adjacency_csv: names size mismatch");
    for (std::size_t j = 0; j < n; ++j) out << (j ? "," : "") << names[j];
    out << '\n';
  }
  out << std::setprecision(17);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ',';
      const double v = a(i, j);
      if (v == std::floor(v) && std::abs(v) < 1e15) out << static_cast<long long>(v);
      else out << v;
    }
    out << '\n';
  }
}

void write_adjacency_csv(const std::filesystem::path& path, const AdjacencyMatrix& a,
                         const std::vector<std::string>& names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_adjacency_csv(out, a, names);
}

int shd(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
  if (a.size() != b.size()) throw MetricError("shd: matrices differ in size");
  double total = 0.0;
  for (std::size_t t = 0; t < a.values().size(); ++t) total += std::abs(a.values()[t] - b.values()[t]);
  return static_cast<int>(std::lround(total));
}

int shd(const Graph& a, const Graph& b) { return shd(to_adjacency(a), to_adjacency(b)); }

double prevalence(const AdjacencyMatrix& truth) {
  const std::size_t n = truth.size();
  if (n < 2) return 0.0;
  double pos = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && truth(i, j) == 1.0) pos += 1.0;
  return pos / static_cast<double>(n * (n - 1));
}

double aupr(const AdjacencyMatrix& scores, const AdjacencyMatrix& truth) {
  if (scores.size() != truth.size()) throw MetricError("aupr: matrices differ in size");
  if (!truth.is_binary()) throw MetricError("aupr: truth must be binary");
  const std::size_t n = truth.size();
  std::vector<std::pair<double, bool>> pairs;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (std::isnan(scores(i, j))) throw MetricError("aupr: score is NaN");
      const bool pos = truth(i, j) == 1.0;
      positives += pos;
      pairs.emplace_back(scores(i, j), pos);
    }
  }
  if (positives == 0) throw MetricError("aupr: truth has no edges, recall is undefined");
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double area = 0.0, recall_prev = 0.0;
  std::size_t tp = 0, seen = 0;
  for (std::size_t t = 0; t < pairs.size();) {
    std::size_t u = t;
    while (u < pairs.size() && pairs[u].first == pairs[t].first) {
      tp += pairs[u].second;
      ++u;
    }
    seen = u;
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    area += (recall - recall_prev) * precision;
    recall_prev = recall;
    t = u;
  }
  return area;
}

double aupr(const Graph& predicted, const Graph& truth) { return aupr(to_adjacency(predicted), to_adjacency(truth)); }

std::string metrics_csv_header() { return "dataset,method,seed,shd,aupr,runtime"; }

std::string to_csv(const MetricsRow& row) {
  std::ostringstream os;
  os << row.dataset << ',' << row.method << ',' << row.seed << ',' << row.shd << ',' << std::setprecision(10)
     << row.aupr << ',' << row.runtime;
  return os.str();
}

std::string to_json(const MetricsRow& row) {
  nlohmann::ordered_json j = {{"dataset", row.dataset}, {"method", row.method}, {"seed", row.seed},
                              {"shd", row.shd},         {"aupr", row.aupr},     {"runtime", row.runtime}};
  return j.dump();
}

}  // namespace eembi
