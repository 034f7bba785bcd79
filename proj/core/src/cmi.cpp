#include "eembi/cmi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "kdtree.hpp"

namespace eembi {

double digamma(double x) {
  if (!(x > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum B_2k / (2k x^2k), k = 1..5
  const double series =
      inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132)))));
  return result + std::log(x) - 0.5 * inv - series;
}

namespace {

void validate(const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& z, std::size_t vars,
              std::size_t rows, int k) {
  if (x.empty() || y.empty()) throw std::invalid_argument("knn_cmi: x and y must be non-empty");
  if (k < 1) throw std::invalid_argument("knn_cmi: k must be positive");
  if (static_cast<std::size_t>(k) >= rows) throw std::invalid_argument("knn_cmi: k must be smaller than N");
  std::vector<int> all;
  all.insert(all.end(), x.begin(), x.end());
  all.insert(all.end(), y.begin(), y.end());
  all.insert(all.end(), z.begin(), z.end());
  for (int v : all)
    if (v < 0 || static_cast<std::size_t>(v) >= vars) throw std::invalid_argument("knn_cmi: column out of range");
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw std::invalid_argument("knn_cmi: column sets must be disjoint");
  }
}

std::vector<double> gather(const std::vector<std::vector<double>>& columns, const std::vector<int>& cols,
                           std::size_t rows) {
  std::vector<double> out(rows * cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& col = columns[static_cast<std::size_t>(cols[c])];
    for (std::size_t r = 0; r < rows; ++r) out[r * cols.size() + c] = col[r];
  }
  return out;
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

struct RowCounts {
  std::size_t joint = 0;  // other rows within rho
  std::size_t xz = 0;
  std::size_t yz = 0;
  std::size_t z = 0;
};

// Neighbor counts for every row, brute force. Rows are laid out as x|y|z.
void brute_counts(const std::vector<double>& joint, std::size_t dx, std::size_t dy, std::size_t dz, std::size_t rows,
                  int k, std::size_t begin, std::size_t end, std::vector<RowCounts>& out) {
  const std::size_t d = dx + dy + dz;
  std::vector<double> sx(rows), sy(rows), sz(rows), sj(rows), scratch(rows);
  for (std::size_t i = begin; i < end; ++i) {
    const double* q = joint.data() + i * d;
    for (std::size_t j = 0; j < rows; ++j) {
      const double* p = joint.data() + j * d;
      sx[j] = detail::chebyshev(p, q, dx);
      sy[j] = detail::chebyshev(p + dx, q + dx, dy);
      sz[j] = dz ? detail::chebyshev(p + dx + dy, q + dx + dy, dz) : 0.0;
      sj[j] = std::max({sx[j], sy[j], sz[j]});
    }
    scratch = sj;
    // k-th smallest over other rows is the (k+1)-th smallest including row i.
    std::nth_element(scratch.begin(), scratch.begin() + k, scratch.end());
    const double rho = scratch[static_cast<std::size_t>(k)];
    RowCounts c;
    for (std::size_t j = 0; j < rows; ++j) {
      if (sj[j] <= rho) ++c.joint;
      if (std::max(sx[j], sz[j]) <= rho) ++c.xz;
      if (std::max(sy[j], sz[j]) <= rho) ++c.yz;
      if (sz[j] <= rho) ++c.z;
    }
    c.joint -= 1;
    if (dz == 0) c.z = rows;
    out[i] = c;
  }
}

}  // namespace

KnnCmiEstimator::KnnCmiEstimator(std::vector<std::vector<double>> columns, KnnOptions options)
    : columns_(std::move(columns)), options_(options) {
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  for (const auto& c : columns_)
    if (c.size() != rows_) throw std::invalid_argument("KnnCmiEstimator: ragged columns");
  digamma_.resize(rows_ + 1, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t m = 1; m <= rows_; ++m) digamma_[m] = digamma(static_cast<double>(m));
}

KnnCmiEstimator::KnnCmiEstimator(const Dataset& d, KnnOptions options)
    : KnnCmiEstimator(d.columns(), options) {}

double KnnCmiEstimator::estimate(const std::vector<int>& x, const std::vector<int>& y,
                                 const std::vector<int>& z) const {
  validate(x, y, z, columns_.size(), rows_, options_.k);
  const std::size_t n = rows_;
  const int k = options_.k;
  std::vector<RowCounts> counts(n);

  const int threads = std::max(1, options_.threads);
  auto run_chunks = [&](auto&& work) {
    if (threads == 1) {
      work(std::size_t{0}, n);
      return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (std::size_t b = 0; b < n; b += chunk) pool.emplace_back([&, b] { work(b, std::min(n, b + chunk)); });
  };

  if (!options_.use_index) {
    const std::vector<double> joint = gather(columns_, concat(concat(x, y), z), n);
    run_chunks([&](std::size_t b, std::size_t e) { brute_counts(joint, x.size(), y.size(), z.size(), n, k, b, e, counts); });
  } else {
    const auto joint_cols = concat(concat(x, y), z);
    const std::size_t d = joint_cols.size();
    const std::vector<double> joint = gather(columns_, joint_cols, n);
    const detail::KdTree joint_tree(joint, d);
    const auto& order = joint_tree.leaf_order();
    if (z.empty()) {
      const std::vector<double> xs = gather(columns_, x, n);
      const std::vector<double> ys = gather(columns_, y, n);
      const detail::KdTree x_tree(xs, x.size());
      const detail::KdTree y_tree(ys, y.size());
      run_chunks([&](std::size_t b, std::size_t e) {
        for (std::size_t t = b; t < e; ++t) {
          const std::size_t i = order[t];
          const double* q = joint.data() + i * d;
          const double rho = joint_tree.kth_distance(q, static_cast<std::size_t>(k) + 1);
          RowCounts c;
          c.joint = joint_tree.count_within(q, rho) - 1;
          c.xz = x_tree.count_within(xs.data() + i * x.size(), rho);
          c.yz = y_tree.count_within(ys.data() + i * y.size(), rho);
          c.z = n;
          counts[i] = c;
        }
      });
    } else {
      // Rows within rho in Z are the only candidates for the XZ and YZ counts.
      const std::vector<double> zs = gather(columns_, z, n);
      const detail::KdTree z_tree(zs, z.size());
      const std::size_t dx = x.size();
      const std::size_t dy = y.size();
      run_chunks([&](std::size_t b, std::size_t e) {
        std::vector<std::uint32_t> near;
        for (std::size_t t = b; t < e; ++t) {
          const std::size_t i = order[t];
          const double* q = joint.data() + i * d;
          const double rho = joint_tree.kth_distance(q, static_cast<std::size_t>(k) + 1);
          RowCounts c;
          near.clear();
          z_tree.collect_within(zs.data() + i * z.size(), rho, near);
          c.z = near.size();
          for (std::uint32_t j : near) {
            const double* p = joint.data() + static_cast<std::size_t>(j) * d;
            const bool in_x = detail::chebyshev(p, q, dx) <= rho;
            const bool in_y = detail::chebyshev(p + dx, q + dx, dy) <= rho;
            c.xz += in_x;
            c.yz += in_y;
            c.joint += in_x && in_y;
          }
          c.joint -= 1;
          counts[i] = c;
        }
      });
    }
  }

  // Grouped as (a + d) - (b + c) so that exchanging X and Y is exact.
  double sum = 0.0;
  for (const auto& c : counts) sum += (digamma_[c.joint] + digamma_[c.z]) - (digamma_[c.xz] + digamma_[c.yz]);
  return sum / static_cast<double>(n);
}

double knn_cmi(const Dataset& d, const CmiQuery& q) {
  KnnOptions options;
  options.k = q.k;
  return KnnCmiEstimator(d, options).estimate(q.x_cols, q.y_cols, q.z_cols);
}

double mutual_information(const Dataset& d, const std::vector<int>& x_cols, const std::vector<int>& y_cols, int k) {
  return knn_cmi(d, CmiQuery{x_cols, y_cols, {}, k});
}

JointTable::JointTable(std::vector<int> arity, std::vector<double> mass)
    : arity_(std::move(arity)), mass_(std::move(mass)) {
  std::size_t size = 1;
  stride_.assign(arity_.size(), 1);
  for (std::size_t v = arity_.size(); v-- > 0;) {
    if (arity_[v] < 1) throw std::invalid_argument("JointTable: arity must be positive");
    stride_[v] = size;
    size *= static_cast<std::size_t>(arity_[v]);
  }
  if (mass_.size() != size) throw std::invalid_argument("JointTable: mass size does not match arities");
  double total = 0.0;
  for (double p : mass_) {
    if (!(p >= 0.0)) throw std::invalid_argument("JointTable: negative mass");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("JointTable: total mass is not 1");
}

int JointTable::value(std::size_t c, std::size_t v) const {
  return static_cast<int>((c / stride_[v]) % static_cast<std::size_t>(arity_[v]));
}

double exact_cmi_discrete(const JointTable& t, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
  std::vector<int> seen(t.variables(), 0);
  for (const NodeSet* s : {&x, &y, &z})
    for (int v : *s) {
      if (v < 0 || static_cast<std::size_t>(v) >= t.variables()) {
        throw std::invalid_argument("exact_cmi_discrete: variable out of range");
      }
      if (seen[static_cast<std::size_t>(v)]++) throw std::invalid_argument("exact_cmi_discrete: sets overlap");
    }

  auto key = [&](std::size_t c, const NodeSet& s) {
    std::size_t k = 0;
    for (int v : s) k = k * static_cast<std::size_t>(t.arity()[static_cast<std::size_t>(v)]) + static_cast<std::size_t>(t.value(c, static_cast<std::size_t>(v)));
    return k;
  };
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> pxyz;
  std::map<std::pair<std::size_t, std::size_t>, double> pxz, pyz;
  std::map<std::size_t, double> pz;
  for (std::size_t c = 0; c < t.mass().size(); ++c) {
    const double p = t.mass()[c];
    if (p == 0.0) continue;
    const std::size_t kx = key(c, x), ky = key(c, y), kz = key(c, z);
    pxyz[{kx, ky, kz}] += p;
    pxz[{kx, kz}] += p;
    pyz[{ky, kz}] += p;
    pz[kz] += p;
  }
  double info = 0.0;
  for (const auto& [cfg, p] : pxyz) {
    const auto [kx, ky, kz] = cfg;
    info += p * std::log(p * pz[kz] / (pxz[{kx, kz}] * pyz[{ky, kz}]));
  }
  return info;
}

JointTable empirical_joint(const Dataset& d, const std::vector<int>& cols) {
  std::vector<int> arity;
  for (int c : cols) {
    if (d.kind(static_cast<std::size_t>(c)) != ColumnKind::discrete) {
      throw std::invalid_argument("empirical_joint: column is not discrete");
    }
    const auto col = d.column(static_cast<std::size_t>(c));
    arity.push_back(static_cast<int>(*std::max_element(col.begin(), col.end())) + 1);
  }
  std::size_t size = 1;
  for (int a : arity) size *= static_cast<std::size_t>(a);
  std::vector<double> mass(size, 0.0);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < cols.size(); ++v) {
      idx = idx * static_cast<std::size_t>(arity[v]) + static_cast<std::size_t>(d.column(static_cast<std::size_t>(cols[v]))[r]);
    }
    mass[idx] += 1.0;
  }
  for (double& m : mass) m /= static_cast<double>(d.rows());
  // Renormalize so rounding in the division cannot trip the 1e-12 check.
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (double& m : mass) m /= total;
  return JointTable(std::move(arity), std::move(mass));
}

}  // namespace eembi
