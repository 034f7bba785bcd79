#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eembi {

/// Sorted, duplicate-free list of node (or variable) indices.
using NodeSet = std::vector<int>;

using Edge = std::pair<int, int>;

/**
 * Mixed graph over nodes 0..n-1. Each unordered pair carries at most one
 * relationship: nothing, a directed edge a->b, or an undirected edge a-b.
 *
 * The same value type represents DAGs, PDAGs, CPDAGs and skeletons; which of
 * these a graph is follows from its edges (see is_acyclic, is_cpdag).
 * Storage mirrors the adjacency encoding: entry (i,j) is set iff i->j or i-j.
 */
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  int size() const noexcept { return n_; }

  /// Adds a->b. Throws std::invalid_argument if a and b are already adjacent.
  void add_directed(int from, int to);
  /// Adds a-b. Throws std::invalid_argument if a and b are already adjacent.
  void add_undirected(int a, int b);
  /// Turns an existing undirected edge from-to into from->to.
  void orient(int from, int to);
  /// Turns any edge between a and b into an undirected one.
  void make_undirected(int a, int b);
  void remove_edge(int a, int b);

  bool has_directed(int from, int to) const;
  bool has_undirected(int a, int b) const;
  bool adjacent(int a, int b) const;

  NodeSet parents(int v) const;
  NodeSet children(int v) const;
  /// Nodes joined to v by an undirected edge.
  NodeSet neighbors(int v) const;
  /// Nodes joined to v by any edge.
  NodeSet adjacent_nodes(int v) const;

  /// Directed edges in lexicographic order.
  std::vector<Edge> directed_edges() const;
  /// Undirected edges as (a,b) with a < b, lexicographic order.
  std::vector<Edge> undirected_edges() const;
  std::size_t edge_count() const;
  bool has_undirected_edges() const;

  /// Raw adjacency entry: true iff i->j or i-j.
  bool entry(int i, int j) const { return m_[index(i, j)] != 0; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }
  void check_pair(int a, int b) const;

  int n_ = 0;
  std::vector<std::uint8_t> m_;
};

/// i -> j <- k with i and k non-adjacent, stored with i < k.
struct VStructure {
  int i = 0;
  int j = 0;
  int k = 0;

  friend auto operator<=>(const VStructure&, const VStructure&) = default;
};

Graph skeleton(const Graph& g);

/// Colliders formed by directed edges of g, sorted by (j, i, k).
std::vector<VStructure> find_v_structures(const Graph& g);

/// Counters reported by meek_closure.
struct MeekTrace {
  int scans = 0;
  int orientations = 0;
  int rule_hits[3] = {0, 0, 0};
};

/**
 * Applies Meek's orientation rules 1-3 until none fires.
 *
 * Rules are tried in order 1, 2, 3; within a rule, undirected edges are
 * visited in canonical order and both orientations of each edge are tried,
 * lower endpoint first. The scan restarts after every orientation, so the
 * result does not depend on anything but the input graph.
 */
Graph meek_closure(const Graph& g, MeekTrace* trace = nullptr);

/// Skeleton of g with the edges of g's V-structures kept directed.
Graph pattern(const Graph& g);

/// CPDAG of a DAG. Throws std::invalid_argument on undirected edges or cycles.
Graph dag_to_cpdag(const Graph& dag);

/// True iff the directed part of g is acyclic and g is the Meek closure of
/// its own pattern.
bool is_cpdag(const Graph& g);

/**
 * A DAG that keeps every directed edge of the PDAG, orients the undirected
 * ones, and adds no V-structure, found by repeatedly removing a sink whose
 * undirected neighbors are adjacent to all its other adjacents. nullopt when
 * no such DAG exists.
 */
std::optional<Graph> consistent_extension(const Graph& pdag);

/// True iff the directed part of g has no directed cycle.
bool is_acyclic(const Graph& g);

/// A topological order of the directed part, or nullopt if it has a cycle.
std::optional<std::vector<int>> topological_order(const Graph& g);

/**
 * d-separation of node sets a and b given c in a DAG, by reachability over
 * (node, direction of entry) states. Throws std::invalid_argument if the sets
 * overlap, hold out-of-range nodes, or the graph has undirected edges.
 */
bool d_separated(const Graph& dag, const NodeSet& a, const NodeSet& b, const NodeSet& c);

/// Graphviz rendering: directed edges as arrows, undirected edges without heads.
std::string to_dot(const Graph& g, const std::vector<std::string>& names = {});

}  // namespace eembi
