#include "eembi/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace eembi {

std::string to_string(Method m) { return m == Method::eembi ? "eembi" : "eembi-pc"; }

Method parse_method(const std::string& text) {
  if (text == "eembi") return Method::eembi;
  if (text == "eembi-pc" || text == "eembi_pc") return Method::eembi_pc;
  throw std::invalid_argument("unknown method '" + text + "' (expected eembi or eembi-pc)");
}

double resolved_beta(const PipelineConfig& cfg, const Dataset& d) {
  if (cfg.beta) return *cfg.beta;
  return d.all_discrete() ? 0.01 : 0.05;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void check_thresholds(double alpha, double beta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
}

// Removes nodes that are sinks of what is left, orienting remaining edges
// into each one. With `strict`, a sink qualifies only if its undirected
// neighbors are adjacent to all its other adjacents. Without it, any sink is
// taken, and when no sink is left the lowest node loses its outgoing edges.
std::optional<Graph> extend(const Graph& pdag, bool strict) {
  if (strict) return consistent_extension(pdag);
  const int n = pdag.size();
  Graph rest = pdag;
  Graph out(n);
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  for (int removed = 0; removed < n; ++removed) {
    int pick = -1;
    for (int x = 0; x < n && pick < 0; ++x)
      if (alive[static_cast<std::size_t>(x)] && rest.children(x).empty()) pick = x;
    for (int x = 0; x < n && pick < 0; ++x)
      if (alive[static_cast<std::size_t>(x)]) pick = x;
    for (int y : rest.adjacent_nodes(pick)) {
      if (!rest.has_directed(pick, y)) out.add_directed(y, pick);
      rest.remove_edge(y, pick);
    }
    alive[static_cast<std::size_t>(pick)] = 0;
  }
  return out;
}

void orient(RunReport& r, const CiMeasure& m, int n, double alpha) {
  if (r.method == Method::eembi) {
    r.cycle_repairs = repair_cycles(r.edges, n);
    r.dag = edges_to_graph(n, r.edges);
    r.cpdag = dag_to_cpdag(r.dag);
    return;
  }
  Graph skel(n);
  for (const auto& e : r.edges)
    if (!skel.adjacent(e.from, e.to)) skel.add_undirected(e.from, e.to);
  PcTrace trace;
  const Graph closed = meek_closure(pc_v_structures(skel, m, alpha, &trace));
  r.vstructure_conflicts = trace.conflicts;
  if (is_valid_cpdag(closed)) {
    r.cpdag = closed;
    r.dag = Graph(n);
    return;
  }
  auto ext = extend(closed, true);
  if (!ext) ext = extend(closed, false);
  r.extension_repairs = 1;
  r.dag = *ext;
  r.cpdag = dag_to_cpdag(r.dag);
}

RunReport learn(const CiMeasure& m, int n, Method method, double alpha, double beta, RunReport r) {
  check_thresholds(alpha, beta);
  const CachedMeasure cached(m);
  r.method = method;
  r.beta = beta;

  auto t = Clock::now();
  r.blankets = improved_iamb(cached, n, alpha);
  r.timings["blankets"] = seconds_since(t);

  t = Clock::now();
  IntersectionResult ix = intersect_markov_blankets(cached, n, r.blankets, beta);
  r.edges = std::move(ix.edges);
  r.exogenous_blankets = std::move(ix.exogenous_blankets);
  r.timings["intersection"] = seconds_since(t);

  t = Clock::now();
  orient(r, cached, n, alpha);
  r.timings["orientation"] = seconds_since(t);

  r.cmi_queries = cached.queries();
  r.cmi_evaluations = cached.evaluations();
  return r;
}

}  // namespace

RunReport run(const CiMeasure& augmented, int n, Method method, double alpha, double beta) {
  if (n < 1 || augmented.variables() < 2 * n) throw std::invalid_argument("run: measure must cover 2n variables");
  RunReport r;
  r.permutation.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r.permutation[static_cast<std::size_t>(i)] = i;
  return learn(augmented, n, method, alpha, beta, std::move(r));
}

RunReport eembi(const CiMeasure& augmented, int n, double alpha, double beta) {
  return run(augmented, n, Method::eembi, alpha, beta);
}

RunReport eembi_pc(const CiMeasure& augmented, int n, double alpha, double beta) {
  return run(augmented, n, Method::eembi_pc, alpha, beta);
}

RunReport run(const Dataset& d, Method method, const PipelineConfig& cfg) {
  const double beta = resolved_beta(cfg, d);
  check_thresholds(cfg.alpha, beta);
  if (d.cols() == 0) throw std::invalid_argument("run: dataset has no columns");
  if (d.rows() <= d.cols() || d.rows() <= static_cast<std::size_t>(cfg.k))
    throw std::invalid_argument("run: too few rows for the number of columns and k");
  const int n = static_cast<int>(d.cols());

  RunReport r;
  IcaOptions ica;
  ica.tol = cfg.ica_tol;
  ica.max_iter = cfg.ica_max_iter;
  ica.seed = cfg.seed;
  ica.contrast = cfg.contrast;
  auto t = Clock::now();
  const ExogenousData raw = generate_exogenous(d, ica);
  r.timings["ica"] = seconds_since(t);
  r.ica_converged = raw.converged;

  t = Clock::now();
  ExogenousData e = match_exogenous(d, raw, cfg.k, cfg.zero_eps);
  r.timings["matching"] = seconds_since(t);
  r.permutation = e.permutation;

  std::vector<std::vector<double>> all = d.columns();
  for (auto& c : e.columns) all.push_back(std::move(c));
  KnnOptions options;
  options.k = cfg.k;
  options.threads = cfg.threads;
  const KnnMeasure m(std::move(all), options);
  return learn(m, n, method, cfg.alpha, beta, std::move(r));
}

RunReport eembi(const Dataset& d, const PipelineConfig& cfg) { return run(d, Method::eembi, cfg); }
RunReport eembi_pc(const Dataset& d, const PipelineConfig& cfg) { return run(d, Method::eembi_pc, cfg); }

int repair_cycles(std::vector<WeightedEdge>& edges, int n) {
  int removed = 0;
  for (;;) {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < edges.size(); ++t) out[static_cast<std::size_t>(edges[t].from)].push_back(t);
    for (auto& list : out)
      std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) { return edges[a].to < edges[b].to; });

    // Depth-first search; the first back edge closes a cycle.
    std::vector<int> state(static_cast<std::size_t>(n), 0);
    std::vector<std::size_t> path;
    std::vector<std::size_t> cycle;
    std::function<bool(int)> dfs = [&](int v) {
      state[static_cast<std::size_t>(v)] = 1;
      for (std::size_t t : out[static_cast<std::size_t>(v)]) {
        const int w = edges[t].to;
        path.push_back(t);
        if (state[static_cast<std::size_t>(w)] == 1) {
          auto start = std::find_if(path.begin(), path.end(), [&](std::size_t s) { return edges[s].from == w; });
          cycle.assign(start, path.end());
          return true;
        }
        if (state[static_cast<std::size_t>(w)] == 0 && dfs(w)) return true;
        path.pop_back();
      }
      state[static_cast<std::size_t>(v)] = 2;
      return false;
    };
    bool found = false;
    for (int v = 0; v < n && !found; ++v)
      if (state[static_cast<std::size_t>(v)] == 0) found = dfs(v);
    if (!found) return removed;

    const std::size_t weakest = *std::min_element(cycle.begin(), cycle.end(), [&](std::size_t a, std::size_t b) {
      if (edges[a].strength != edges[b].strength) return edges[a].strength < edges[b].strength;
      return std::pair(edges[a].from, edges[a].to) < std::pair(edges[b].from, edges[b].to);
    });
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(weakest));
    ++removed;
  }
}

Graph pc_v_structures(const Graph& skeleton, const CiMeasure& m, double alpha, PcTrace* trace) {
  if (!skeleton.directed_edges().empty()) throw std::invalid_argument("pc_v_structures: skeleton must be undirected");
  const int n = skeleton.size();
  Graph out = skeleton;
  PcTrace local;
  for (int j = 0; j < n; ++j) {
    const NodeSet adj_j = skeleton.adjacent_nodes(j);
    for (std::size_t a = 0; a < adj_j.size(); ++a) {
      for (std::size_t b = a + 1; b < adj_j.size(); ++b) {
        const int i = adj_j[a];
        const int k = adj_j[b];
        if (skeleton.adjacent(i, k)) continue;
        NodeSet cand = skeleton.adjacent_nodes(i);
        const NodeSet adj_k = skeleton.adjacent_nodes(k);
        cand.insert(cand.end(), adj_k.begin(), adj_k.end());
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::erase_if(cand, [&](int v) { return v == i || v == j || v == k; });

        bool separated = false;
        const std::size_t c = cand.size();
        for (std::size_t size = 0; size <= c && !separated; ++size) {
          // Lexicographic combinations of `size` positions.
          std::vector<std::size_t> pos(size);
          for (std::size_t t = 0; t < size; ++t) pos[t] = t;
          for (;;) {
            NodeSet z;
            for (std::size_t p : pos) z.push_back(cand[p]);
            ++local.separation_queries;
            if (m.cmi(i, k, z) < alpha) {
              separated = true;
              break;
            }
            std::size_t t = size;
            while (t > 0 && pos[t - 1] == c - size + t - 1) --t;
            if (t == 0) break;
            ++pos[t - 1];
            for (std::size_t u = t; u < size; ++u) pos[u] = pos[u - 1] + 1;
          }
        }
        if (!separated) continue;
        ++local.oriented_triples;
        for (int from : {i, k}) {
          if (out.has_undirected(from, j)) out.orient(from, j);
          else if (out.has_directed(j, from)) ++local.conflicts;
        }
      }
    }
  }
  if (trace) *trace = local;
  return out;
}

bool is_valid_cpdag(const Graph& g) {
  if (!is_cpdag(g)) return false;
  const auto ext = consistent_extension(g);
  return ext && dag_to_cpdag(*ext) == g;
}

std::string run_manifest(const PipelineConfig& cfg, const RunReport& report,
                         const std::map<std::string, std::string>& extra) {
  nlohmann::ordered_json j;
  j["method"] = to_string(report.method);
  j["config"] = {{"alpha", cfg.alpha},
                 {"beta", report.beta},
                 {"k", cfg.k},
                 {"seed", cfg.seed},
                 {"zero_eps", cfg.zero_eps},
                 {"ica_tol", cfg.ica_tol},
                 {"ica_max_iter", cfg.ica_max_iter},
                 {"contrast", cfg.contrast == Contrast::logcosh ? "logcosh" : "exp"},
                 {"threads", cfg.threads}};
  j["counters"] = {{"cycle_repairs", report.cycle_repairs},
                   {"vstructure_conflicts", report.vstructure_conflicts},
                   {"extension_repairs", report.extension_repairs},
                   {"cmi_queries", report.cmi_queries},
                   {"cmi_evaluations", report.cmi_evaluations},
                   {"edges", report.cpdag.edge_count()}};
  j["permutation"] = report.permutation;
  j["ica_converged"] = report.ica_converged;
  j["timings"] = report.timings;
  for (const auto& [key, value] : extra) j[key] = value;
  return j.dump(2) + "\n";
}

}  // namespace eembi
