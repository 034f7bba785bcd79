#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "eembi/assignment.hpp"
#include "eembi/data.hpp"
#include "eembi/error.hpp"
#include "eembi/metrics.hpp"
#include "eembi/pipeline.hpp"
#include "eembi/random.hpp"
#include "eembi/simulate.hpp"

namespace eembi::cli {

namespace fs = std::filesystem;

namespace {

int env_threads() {
  const char* v = std::getenv("EEMBI_THREADS");
  if (!v || !*v) return 1;
  try {
    return std::max(1, std::stoi(v));
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("EEMBI_THREADS must be an integer, got '") + v + "'");
  }
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::string replicate_name(int r) {
  std::ostringstream os;
  os << "replicate_" << std::setw(3) << std::setfill('0') << r;
  return os.str();
}

struct LearnArgs {
  std::string input;
  std::string method = "eembi";
  double alpha = 0.01;
  double beta = 0.0;
  int k = 5;
  std::uint64_t seed = 0;
  double zero_eps = 0.01;
  int ica_max_iter = 200;
  double ica_tol = 1e-4;
  std::string contrast = "logcosh";
  std::string output;
  std::string manifest;
  std::string config;
  std::string kind;
  std::size_t cutoff = 20;
  std::size_t sample_rows = 0;
  std::string truth;
};

struct EvalArgs {
  std::string pred;
  std::string truth;
  bool json = false;
  std::string dataset = "input";
  std::string method = "unknown";
  std::uint64_t seed = 0;
  double runtime = 0.0;
};

struct SimArgs {
  int nodes = 8;
  double edge_prob = 0.3;
  std::size_t rows = 5000;
  int replicates = 20;
  std::string mechanism = "linear";
  std::uint64_t seed = 0;
  std::string out;
};

struct BenchArgs {
  int nodes = 8;
  double edge_prob = 0.25;
  std::string mechanism = "linear";
  std::vector<std::string> methods{"eembi", "eembi-pc"};
  std::vector<double> betas{0.01, 0.05, 0.1, 0.15, 0.2};
  std::vector<std::size_t> sizes{400, 600, 800, 1000, 1200, 1400, 1600};
  int seeds = 3;
  std::uint64_t seed = 0;
  double alpha = 0.01;
  int k = 5;
  std::string output;
};

Scm make_scm(const std::string& mechanism, const Graph& dag, std::uint64_t seed) {
  if (mechanism == "linear") return make_linear_scm(dag, seed);
  if (mechanism == "laplace") return make_linear_scm(dag, seed, NoiseKind::laplace);
  if (mechanism == "discrete") return make_discrete_scm(dag, seed);
  throw std::invalid_argument("unknown mechanism '" + mechanism + "' (expected linear, laplace or discrete)");
}

int cmd_learn(const LearnArgs& a, const CLI::App& app, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  LoadOptions load;
  std::string method = a.method;
  if (!a.config.empty()) {
    std::ifstream f(a.config);
    if (!f) throw IngestionError("cannot open config " + a.config);
    const auto kv = parse_key_values(f);
    load = load_options_from(kv);
    auto get = [&](const char* key) -> std::optional<std::string> {
      const auto it = kv.find(key);
      return it == kv.end() ? std::nullopt : std::optional(it->second);
    };
    if (auto v = get("alpha")) cfg.alpha = std::stod(*v);
    if (auto v = get("beta")) cfg.beta = std::stod(*v);
    if (auto v = get("k")) cfg.k = std::stoi(*v);
    if (auto v = get("seed")) cfg.seed = std::stoull(*v);
    if (auto v = get("zero_eps")) cfg.zero_eps = std::stod(*v);
    if (auto v = get("method")) method = *v;
  }
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  if (given("--alpha")) cfg.alpha = a.alpha;
  if (given("--beta")) cfg.beta = a.beta;
  if (given("--k")) cfg.k = a.k;
  if (given("--seed")) cfg.seed = a.seed;
  if (given("--zero-eps")) cfg.zero_eps = a.zero_eps;
  if (given("--method")) method = a.method;
  if (given("--kind")) load.default_kind = parse_kind_spec(a.kind);
  if (given("--cutoff")) load.discrete_cutoff = a.cutoff;
  cfg.ica_max_iter = a.ica_max_iter;
  cfg.ica_tol = a.ica_tol;
  if (a.contrast == "logcosh") cfg.contrast = Contrast::logcosh;
  else if (a.contrast == "exp") cfg.contrast = Contrast::exp;
  else throw std::invalid_argument("unknown contrast '" + a.contrast + "'");
  cfg.threads = env_threads();
  const Method m = parse_method(method);

  Dataset d = load_csv(a.input, load);
  if (a.sample_rows > 0 && a.sample_rows < d.rows()) d = sample_rows(d, a.sample_rows, cfg.seed);

  const auto start = std::chrono::steady_clock::now();
  const RunReport report = run(d, m, cfg);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const AdjacencyMatrix adj = to_adjacency(report.cpdag);
  if (a.output.empty()) {
    write_adjacency_csv(out, adj, d.names());
  } else {
    auto f = open_out(a.output);
    write_adjacency_csv(f, adj, d.names());
  }
  std::string manifest_path = a.manifest;
  if (manifest_path.empty() && !a.output.empty()) manifest_path = a.output + ".manifest.json";
  std::map<std::string, std::string> extra{{"input", a.input}, {"rows", std::to_string(d.rows())}};
  if (a.sample_rows > 0) extra["sample_rows"] = std::to_string(a.sample_rows);
  if (!manifest_path.empty()) {
    auto f = open_out(manifest_path);
    f << run_manifest(cfg, report, extra);
  }
  if (!a.truth.empty()) {
    const AdjacencyMatrix truth = read_adjacency_csv(a.truth);
    MetricsRow row{fs::path(a.input).stem().string(), to_string(m), cfg.seed, shd(adj, truth), aupr(adj, truth),
                   runtime};
    (a.output.empty() ? err : out) << metrics_csv_header() << '\n' << to_csv(row) << '\n';
  }
  return ok;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const AdjacencyMatrix pred = read_adjacency_csv(a.pred);
  const AdjacencyMatrix truth = read_adjacency_csv(a.truth);
  if (pred.size() != truth.size()) throw MetricError("pred and truth differ in size");
  const MetricsRow row{a.dataset, a.method, a.seed, shd(pred, truth), aupr(pred, truth), a.runtime};
  if (a.json) out << to_json(row) << '\n';
  else out << metrics_csv_header() << '\n' << to_csv(row) << '\n';
  return ok;
}

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  if (a.replicates < 1) throw std::invalid_argument("--replicates must be positive");
  const fs::path root(a.out);
  for (int r = 0; r < a.replicates; ++r) {
    const std::uint64_t rs = derive_seed(a.seed, static_cast<std::uint64_t>(r));
    const Graph dag = random_dag(a.nodes, a.edge_prob, derive_seed(rs, 0));
    const Scm scm = make_scm(a.mechanism, dag, derive_seed(rs, 1));
    const Sample s = sample(scm, a.rows, derive_seed(rs, 2));
    const fs::path dir = root / replicate_name(r);
    fs::create_directories(dir);
    write_adjacency_csv(dir / "dag.csv", to_adjacency(dag), s.data.names());
    write_adjacency_csv(dir / "cpdag.csv", to_adjacency(dag_to_cpdag(dag)), s.data.names());
    write_csv(dir / "data.csv", s.data);
    nlohmann::ordered_json j = {{"replicate", r},       {"seed", a.seed},          {"replicate_seed", rs},
                                {"nodes", a.nodes},     {"edge_prob", a.edge_prob}, {"rows", a.rows},
                                {"mechanism", a.mechanism}, {"edges", dag.edge_count()}};
    auto f = open_out(dir / "manifest.json");
    f << j.dump(2) << '\n';
  }
  out << "wrote " << a.replicates << " replicates to " << root.string() << '\n';
  return ok;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  struct Cell {
    Method method;
    double beta;
    std::size_t size;
    int seed_index;
  };
  std::vector<Cell> cells;
  std::vector<Method> methods;
  for (const auto& m : a.methods) methods.push_back(parse_method(m));
  for (int s = 0; s < a.seeds; ++s)
    for (std::size_t size : a.sizes)
      for (double beta : a.betas)
        for (Method m : methods) cells.push_back({m, beta, size, s});

  std::vector<std::optional<MetricsRow>> rows(cells.size());
  std::vector<std::string> errors(cells.size());
  auto work = [&](std::size_t c) {
    const Cell& cell = cells[c];
    const std::uint64_t rs = derive_seed(a.seed, static_cast<std::uint64_t>(cell.seed_index));
    const Graph dag = random_dag(a.nodes, a.edge_prob, derive_seed(rs, 0));
    const Scm scm = make_scm(a.mechanism, dag, derive_seed(rs, 1));
    const Sample s = sample(scm, cell.size, derive_seed(rs, 2 + cell.size));
    PipelineConfig cfg;
    cfg.alpha = a.alpha;
    cfg.beta = cell.beta;
    cfg.k = a.k;
    cfg.seed = rs;
    std::ostringstream name;
    name << a.mechanism << "_n" << a.nodes << "_N" << cell.size << "_beta" << cell.beta;
    try {
      const auto start = std::chrono::steady_clock::now();
      const RunReport r = run(s.data, cell.method, cfg);
      const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const Graph truth = dag_to_cpdag(dag);
      const double pr = truth.edge_count() ? aupr(r.cpdag, truth) : 0.0;
      rows[c] = MetricsRow{name.str(), to_string(cell.method), rs, shd(r.cpdag, truth), pr, runtime};
    } catch (const PipelineError& e) {
      errors[c] = name.str() + " " + to_string(cell.method) + " seed " + std::to_string(rs) + ": " + e.what();
    }
  };
  const int threads = env_threads();
  if (threads <= 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) work(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) work(c);
      });
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!a.output.empty()) {
    file = open_out(a.output);
    sink = &file;
  }
  *sink << metrics_csv_header() << '\n';
  std::size_t failed = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (rows[c]) *sink << to_csv(*rows[c]) << '\n';
    else {
      ++failed;
      err << "bench cell failed: " << errors[c] << '\n';
    }
  }
  if (failed == cells.size() && !cells.empty()) throw PipelineError("every bench cell failed");
  return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"EEMBI causal structure learning"};
  app.require_subcommand(1);

  LearnArgs la;
  auto* learn = app.add_subcommand("learn", "Learn a CPDAG from a CSV dataset");
  learn->add_option("--input", la.input, "CSV with a header row")->required();
  learn->add_option("--method", la.method, "eembi or eembi-pc");
  learn->add_option("--alpha", la.alpha, "Markov blanket threshold");
  learn->add_option("--beta", la.beta, "Intersection threshold (default 0.01 discrete, 0.05 continuous)");
  learn->add_option("--k", la.k, "Nearest neighbors for CMI");
  learn->add_option("--seed", la.seed, "ICA and row-sampling seed");
  learn->add_option("--zero-eps", la.zero_eps, "MI at or below this counts as zero when matching");
  learn->add_option("--ica-max-iter", la.ica_max_iter, "FastICA iterations per component");
  learn->add_option("--ica-tol", la.ica_tol, "FastICA convergence tolerance");
  learn->add_option("--contrast", la.contrast, "logcosh or exp");
  learn->add_option("--output", la.output, "Adjacency CSV (stdout when omitted)");
  learn->add_option("--manifest", la.manifest, "Run manifest JSON (default <output>.manifest.json)");
  learn->add_option("--config", la.config, "key=value file; flags given on the command line win");
  learn->add_option("--kind", la.kind, "Column typing: auto, discrete, continuous, categorical");
  learn->add_option("--cutoff", la.cutoff, "Distinct-value cutoff for automatic discrete typing");
  learn->add_option("--sample-rows", la.sample_rows, "Learn on a seeded random subset of rows");
  learn->add_option("--truth", la.truth, "Adjacency CSV to score the result against");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score a predicted adjacency matrix");
  eval->add_option("--pred", ea.pred, "Predicted adjacency CSV")->required();
  eval->add_option("--truth", ea.truth, "True adjacency CSV")->required();
  eval->add_flag("--json", ea.json, "Print a JSON row instead of CSV");
  eval->add_option("--dataset", ea.dataset, "Dataset label for the report row");
  eval->add_option("--method", ea.method, "Method label for the report row");
  eval->add_option("--seed", ea.seed, "Seed label for the report row");
  eval->add_option("--runtime", ea.runtime, "Runtime label for the report row");

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate", "Write synthetic replicates");
  sim->add_option("--nodes", sa.nodes, "Nodes per DAG");
  sim->add_option("--edge-prob", sa.edge_prob, "Probability of each forward edge");
  sim->add_option("--rows", sa.rows, "Samples per replicate");
  sim->add_option("--replicates", sa.replicates, "Number of replicates");
  sim->add_option("--mechanism", sa.mechanism, "linear, laplace or discrete");
  sim->add_option("--seed", sa.seed, "Base seed");
  sim->add_option("--out", sa.out, "Output directory")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Sweep methods, beta, sample size and seeds");
  bench->add_option("--nodes", ba.nodes, "Nodes per DAG");
  bench->add_option("--edge-prob", ba.edge_prob, "Probability of each forward edge");
  bench->add_option("--mechanism", ba.mechanism, "linear, laplace or discrete");
  bench->add_option("--methods", ba.methods, "Methods to run")->delimiter(',');
  bench->add_option("--betas", ba.betas, "Intersection thresholds")->delimiter(',');
  bench->add_option("--sizes", ba.sizes, "Sample sizes")->delimiter(',');
  bench->add_option("--seeds", ba.seeds, "Replicates per cell");
  bench->add_option("--seed", ba.seed, "Base seed");
  bench->add_option("--alpha", ba.alpha, "Markov blanket threshold");
  bench->add_option("--k", ba.k, "Nearest neighbors for CMI");
  bench->add_option("--output", ba.output, "Metrics CSV (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*learn) return cmd_learn(la, *learn, out, err);
    if (*eval) return cmd_eval(ea, out);
    if (*sim) return cmd_simulate(sa, out);
    if (*bench) return cmd_bench(ba, out, err);
  } catch (const IngestionError& e) {
    err << "error: " << e.what() << '\n';
    return ingestion;
  } catch (const MetricError& e) {
    err << "error: " << e.what() << '\n';
    return metric;
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << '\n';
    return pipeline;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
  return usage;
}

}  // namespace eembi::cli
