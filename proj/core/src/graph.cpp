#include "eembi/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace eembi {

Graph::Graph(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("Graph: negative node count");
  m_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

void Graph::check_pair(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) {
    throw std::invalid_argument("Graph: node index out of range");
  }
  if (a == b) throw std::invalid_argument("Graph: self-edges are not allowed");
}

void Graph::add_directed(int from, int to) {
  check_pair(from, to);
  if (adjacent(from, to)) throw std::invalid_argument("Graph: pair already adjacent");
  m_[index(from, to)] = 1;
}

void Graph::add_undirected(int a, int b) {
  check_pair(a, b);
  if (adjacent(a, b)) throw std::invalid_argument("Graph: pair already adjacent");
  m_[index(a, b)] = 1;
  m_[index(b, a)] = 1;
}

void Graph::orient(int from, int to) {
  check_pair(from, to);
  if (!has_undirected(from, to)) throw std::invalid_argument("Graph: orient needs an undirected edge");
  m_[index(to, from)] = 0;
}

void Graph::make_undirected(int a, int b) {
  check_pair(a, b);
  if (!adjacent(a, b)) throw std::invalid_argument("Graph: no edge to undirect");
  m_[index(a, b)] = 1;
  m_[index(b, a)] = 1;
}

void Graph::remove_edge(int a, int b) {
  check_pair(a, b);
  m_[index(a, b)] = 0;
  m_[index(b, a)] = 0;
}

bool Graph::has_directed(int from, int to) const {
  return m_[index(from, to)] && !m_[index(to, from)];
}

bool Graph::has_undirected(int a, int b) const {
  return m_[index(a, b)] && m_[index(b, a)];
}

bool Graph::adjacent(int a, int b) const {
  return m_[index(a, b)] || m_[index(b, a)];
}

NodeSet Graph::parents(int v) const {
  NodeSet out;
  for (int u = 0; u < n_; ++u)
    if (u != v && has_directed(u, v)) out.push_back(u);
  return out;
}

NodeSet Graph::children(int v) const {
  NodeSet out;
  for (int u = 0; u < n_; ++u)
    if (u != v && has_directed(v, u)) out.push_back(u);
  return out;
}

NodeSet Graph::neighbors(int v) const {
  NodeSet out;
  for (int u = 0; u < n_; ++u)
    if (u != v && has_undirected(v, u)) out.push_back(u);
  return out;
}

NodeSet Graph::adjacent_nodes(int v) const {
  NodeSet out;
  for (int u = 0; u < n_; ++u)
    if (u != v && adjacent(v, u)) out.push_back(u);
  return out;
}

std::vector<Edge> Graph::directed_edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j && has_directed(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<Edge> Graph::undirected_edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (has_undirected(i, j)) out.emplace_back(i, j);
  return out;
}

std::size_t Graph::edge_count() const {
  std::size_t count = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (adjacent(i, j)) ++count;
  return count;
}

bool Graph::has_undirected_edges() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (has_undirected(i, j)) return true;
  return false;
}

Graph skeleton(const Graph& g) {
  Graph out(g.size());
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j)
      if (g.adjacent(i, j)) out.add_undirected(i, j);
  return out;
}

std::vector<VStructure> find_v_structures(const Graph& g) {
  std::vector<VStructure> out;
  for (int j = 0; j < g.size(); ++j) {
    const NodeSet pa = g.parents(j);
    for (std::size_t a = 0; a < pa.size(); ++a)
      for (std::size_t b = a + 1; b < pa.size(); ++b)
        if (!g.adjacent(pa[a], pa[b])) out.push_back({pa[a], j, pa[b]});
  }
  return out;
}

namespace {

// Rule 1: i -> x and x - y with i, y non-adjacent gives x -> y.
bool rule1(const Graph& g, int x, int y) {
  for (int i = 0; i < g.size(); ++i)
    if (i != y && g.has_directed(i, x) && !g.adjacent(i, y)) return true;
  return false;
}

// Rule 2: x -> j -> y and x - y gives x -> y.
bool rule2(const Graph& g, int x, int y) {
  for (int j = 0; j < g.size(); ++j)
    if (j != x && j != y && g.has_directed(x, j) && g.has_directed(j, y)) return true;
  return false;
}

// Rule 3: x - j -> y, x - l -> y, x - y, j and l non-adjacent gives x -> y.
bool rule3(const Graph& g, int x, int y) {
  NodeSet mid;
  for (int j = 0; j < g.size(); ++j)
    if (j != x && j != y && g.has_undirected(x, j) && g.has_directed(j, y)) mid.push_back(j);
  for (std::size_t a = 0; a < mid.size(); ++a)
    for (std::size_t b = a + 1; b < mid.size(); ++b)
      if (!g.adjacent(mid[a], mid[b])) return true;
  return false;
}

}  // namespace

Graph meek_closure(const Graph& g, MeekTrace* trace) {
  Graph out = g;
  MeekTrace local;
  for (;;) {
    ++local.scans;
    bool oriented = false;
    for (int rule = 0; rule < 3 && !oriented; ++rule) {
      for (const auto& [a, b] : out.undirected_edges()) {
        for (const auto& [x, y] : {Edge{a, b}, Edge{b, a}}) {
          const bool fires = rule == 0 ? rule1(out, x, y) : rule == 1 ? rule2(out, x, y) : rule3(out, x, y);
          if (fires) {
            out.orient(x, y);
            ++local.orientations;
            ++local.rule_hits[rule];
            oriented = true;
            break;
          }
        }
        if (oriented) break;
      }
    }
    if (!oriented) break;
  }
  if (trace) *trace = local;
  return out;
}

Graph pattern(const Graph& g) {
  Graph out = skeleton(g);
  for (const auto& v : find_v_structures(g)) {
    if (out.has_undirected(v.i, v.j)) out.orient(v.i, v.j);
    if (out.has_undirected(v.k, v.j)) out.orient(v.k, v.j);
  }
  return out;
}

Graph dag_to_cpdag(const Graph& dag) {
  if (dag.has_undirected_edges()) throw std::invalid_argument("dag_to_cpdag: input has undirected edges");
  if (!is_acyclic(dag)) throw std::invalid_argument("dag_to_cpdag: input has a directed cycle");
  return meek_closure(pattern(dag));
}

bool is_cpdag(const Graph& g) {
  return is_acyclic(g) && meek_closure(pattern(g)) == g;
}

std::optional<std::vector<int>> topological_order(const Graph& g) {
  const int n = g.size();
  std::vector<int> indegree(n, 0);
  for (const auto& [a, b] : g.directed_edges()) ++indegree[b];
  std::vector<int> order;
  order.reserve(n);
  // Lowest-index-first Kahn keeps the order deterministic.
  std::vector<int> ready;
  for (int v = n - 1; v >= 0; --v)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int c : g.children(v)) {
      if (--indegree[c] == 0) {
        ready.push_back(c);
        std::sort(ready.rbegin(), ready.rend());
      }
    }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

bool is_acyclic(const Graph& g) { return topological_order(g).has_value(); }

bool d_separated(const Graph& dag, const NodeSet& a, const NodeSet& b, const NodeSet& c) {
  const int n = dag.size();
  std::vector<std::uint8_t> role(n, 0);  // bit 0: A, bit 1: B, bit 2: C
  auto mark = [&](const NodeSet& s, std::uint8_t bit) {
    for (int v : s) {
      if (v < 0 || v >= n) throw std::invalid_argument("d_separated: node out of range");
      if (role[v] & ~bit) throw std::invalid_argument("d_separated: node sets must be disjoint");
      role[v] |= bit;
    }
  };
  mark(a, 1);
  mark(b, 2);
  mark(c, 4);
  if (dag.has_undirected_edges()) throw std::invalid_argument("d_separated: graph must be a DAG");

  // Ancestors of C (C included): colliders in this set are open.
  std::vector<std::uint8_t> anc(n, 0);
  std::deque<int> queue(c.begin(), c.end());
  for (int v : c) anc[v] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int p : dag.parents(v))
      if (!anc[p]) {
        anc[p] = 1;
        queue.push_back(p);
      }
  }

  // State (v, up): reached v from a child; (v, down): reached v from a parent.
  enum : int { kUp = 0, kDown = 1 };
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(n) * 2, 0);
  std::deque<std::pair<int, int>> frontier;
  for (int v : a) frontier.emplace_back(v, kUp);
  while (!frontier.empty()) {
    const auto [v, dir] = frontier.front();
    frontier.pop_front();
    auto& seen = visited[static_cast<std::size_t>(v) * 2 + dir];
    if (seen) continue;
    seen = 1;
    const bool conditioned = role[v] & 4;
    if (!conditioned && (role[v] & 2)) return false;
    if (dir == kUp) {
      if (conditioned) continue;
      for (int p : dag.parents(v)) frontier.emplace_back(p, kUp);
      for (int ch : dag.children(v)) frontier.emplace_back(ch, kDown);
    } else {
      if (!conditioned)
        for (int ch : dag.children(v)) frontier.emplace_back(ch, kDown);
      if (anc[v])
        for (int p : dag.parents(v)) frontier.emplace_back(p, kUp);
    }
  }
  return true;
}

std::string to_dot(const Graph& g, const std::vector<std::string>& names) {
  auto label = [&](int v) {
    return v < static_cast<int>(names.size()) ? names[v] : "x" + std::to_string(v);
  };
  std::ostringstream os;
  os << "digraph G {\n";
  for (int v = 0; v < g.size(); ++v) os << "  n" << v << " [label=\"" << label(v) << "\"];\n";
  for (const auto& [a, b] : g.directed_edges()) os << "  n" << a << " -> n" << b << ";\n";
  for (const auto& [a, b] : g.undirected_edges()) os << "  n" << a << " -> n" << b << " [dir=none];\n";
  os << "}\n";
  return os.str();
}

std::optional<Graph> consistent_extension(const Graph& pdag) {
  const int n = pdag.size();
  Graph rest = pdag;
  Graph out(n);
  for (const auto& [a, b] : pdag.directed_edges()) out.add_directed(a, b);
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  for (int removed = 0; removed < n; ++removed) {
    int pick = -1;
    for (int x = 0; x < n && pick < 0; ++x) {
      if (!alive[static_cast<std::size_t>(x)] || !rest.children(x).empty()) continue;
      const NodeSet adj = rest.adjacent_nodes(x);
      bool ok = true;
      for (int y : rest.neighbors(x)) {
        for (int z : adj)
          if (z != y && !rest.adjacent(y, z)) ok = false;
      }
      if (ok) pick = x;
    }
    if (pick < 0) return std::nullopt;
    for (int y : rest.neighbors(pick)) out.add_directed(y, pick);
    for (int y : rest.adjacent_nodes(pick)) rest.remove_edge(y, pick);
    alive[static_cast<std::size_t>(pick)] = 0;
  }
  return out;
}

}  // namespace eembi
