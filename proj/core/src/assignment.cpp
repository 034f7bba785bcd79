#include "eembi/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace eembi {

CostMatrix::CostMatrix(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (values_.size() != n * n) throw std::invalid_argument("CostMatrix: expected n*n values");
}

namespace {

// Rows reachable by alternating paths from a row left unmatched by a maximum
// matching on the feasible cells. Their feasible columns are all matched to
// rows inside the set, so the set has more rows than usable columns.
std::vector<int> hall_violator(const CostMatrix& c) {
  const int n = static_cast<int>(c.size());
  std::vector<int> row_of(static_cast<std::size_t>(n), -1);
  std::vector<int> col_of(static_cast<std::size_t>(n), -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int r) {
    for (int j = 0; j < n; ++j) {
      if (c.blocked(static_cast<std::size_t>(r), static_cast<std::size_t>(j)) || seen[static_cast<std::size_t>(j)])
        continue;
      seen[static_cast<std::size_t>(j)] = 1;
      if (row_of[static_cast<std::size_t>(j)] < 0 || augment(row_of[static_cast<std::size_t>(j)])) {
        row_of[static_cast<std::size_t>(j)] = r;
        col_of[static_cast<std::size_t>(r)] = j;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < n; ++r) {
    seen.assign(static_cast<std::size_t>(n), 0);
    augment(r);
  }
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  for (int r = 0; r < n; ++r)
    if (col_of[static_cast<std::size_t>(r)] < 0) {
      in[static_cast<std::size_t>(r)] = 1;
      stack.push_back(r);
    }
  while (!stack.empty()) {
    const int r = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (c.blocked(static_cast<std::size_t>(r), static_cast<std::size_t>(j))) continue;
      const int next = row_of[static_cast<std::size_t>(j)];
      if (next >= 0 && !in[static_cast<std::size_t>(next)]) {
        in[static_cast<std::size_t>(next)] = 1;
        stack.push_back(next);
      }
    }
  }
  std::vector<int> rows;
  for (int r = 0; r < n; ++r)
    if (in[static_cast<std::size_t>(r)]) rows.push_back(r);
  return rows;
}

}  // namespace

Assignment solve_assignment(const CostMatrix& c) {
  const std::size_t n = c.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : c.values()) {
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("solve_assignment: cost must be finite or +infinity");
    if (v != CostMatrix::infeasible) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  // Any total using a big cell exceeds every feasible total.
  const double big = std::isfinite(lo) ? static_cast<double>(n) * (hi - lo) + std::abs(lo) + std::abs(hi) + 1.0 : 1.0;
  auto cost = [&](std::size_t i, std::size_t j) { return c.blocked(i, j) ? big : c(i, j); };

  // 1-based arrays; column 0 is the virtual start column.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment a;
  a.column_for_row.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) a.column_for_row[p[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(a.column_for_row[i]);
    if (c.blocked(i, j)) {
      std::vector<int> rows = hall_violator(c);
      std::ostringstream msg;
      msg << "assignment infeasible: rows";
      for (int r : rows) msg << ' ' << r;
      msg << " cannot all be matched to allowed columns";
      throw AssignmentInfeasible(msg.str(), std::move(rows));
    }
    a.cost += c(i, j);
  }
  return a;
}

}  // namespace eembi
