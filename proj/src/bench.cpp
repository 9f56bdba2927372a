#include "rgt/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rgt/mst.hpp"
#include "rgt/oracle.hpp"

namespace rgt {

std::string_view to_string(GraphClass graph_class) {
  switch (graph_class) {
    case GraphClass::grid: return "grid";
    case GraphClass::fixed_wheel: return "fixedwheel";
    case GraphClass::wheel: return "wheel";
  }
  return "?";
}

std::optional<GraphClass> parse_graph_class(std::string_view text) {
  if (text == "grid") return GraphClass::grid;
  if (text == "fixedwheel" || text == "fixed_wheel" || text == "fixedWheel") return GraphClass::fixed_wheel;
  if (text == "wheel") return GraphClass::wheel;
  return std::nullopt;
}

namespace {

class WeightedBuilder {
 public:
  explicit WeightedBuilder(std::uint64_t seed) : rng_(seed) {}

  NodeId node() { return graph_.add_node(); }

  void edge(NodeId a, NodeId b) {
    const std::int64_t weight = weights_(rng_);
    if (flip_(rng_)) std::swap(a, b);
    graph_.add_edge(a, b, Label{weight});
  }

  HostGraph take() { return std::move(graph_); }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::int64_t> weights_{1, 1000};
  std::bernoulli_distribution flip_{0.5};
  HostGraph graph_;
};

void require_size(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

HostGraph make_grid(int k, std::uint64_t seed) {
  require_size(k >= 1, "grid size must be at least 1");
  WeightedBuilder builder(seed);
  std::vector<NodeId> nodes;
  for (int i = 0; i < k * k; ++i) nodes.push_back(builder.node());
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      if (c + 1 < k) builder.edge(nodes[r * k + c], nodes[r * k + c + 1]);
      if (r + 1 < k) builder.edge(nodes[r * k + c], nodes[(r + 1) * k + c]);
    }
  }
  return builder.take();
}

HostGraph make_fixed_wheel(int k, std::uint64_t seed) {
  require_size(k >= 1, "fixed wheel size must be at least 1");
  constexpr int kSpokes = 16;
  WeightedBuilder builder(seed);
  const NodeId hub = builder.node();
  std::vector<NodeId> rim;
  for (int s = 0; s < kSpokes; ++s) {
    NodeId previous = hub;
    for (int step = 0; step < k; ++step) {
      const NodeId next = builder.node();
      builder.edge(previous, next);
      previous = next;
    }
    rim.push_back(previous);
  }
  for (int s = 0; s < kSpokes; ++s) builder.edge(rim[s], rim[(s + 1) % kSpokes]);
  return builder.take();
}

HostGraph make_wheel(int k, std::uint64_t seed) {
  require_size(k >= 3, "wheel size must be at least 3");
  WeightedBuilder builder(seed);
  const NodeId hub = builder.node();
  std::vector<NodeId> rim;
  for (int i = 0; i < k; ++i) rim.push_back(builder.node());
  for (int i = 0; i < k; ++i) builder.edge(hub, rim[i]);
  for (int i = 0; i < k; ++i) builder.edge(rim[i], rim[(i + 1) % k]);
  return builder.take();
}

HostGraph generate(GraphClass graph_class, int k, std::uint64_t seed) {
  switch (graph_class) {
    case GraphClass::grid: return make_grid(k, seed);
    case GraphClass::fixed_wheel: return make_fixed_wheel(k, seed);
    case GraphClass::wheel: return make_wheel(k, seed);
  }
  throw std::invalid_argument("unknown graph class");
}

std::uint64_t rep_seed(std::uint64_t base, GraphClass graph_class, int k, int rep) {
  // splitmix64 over the point coordinates
  std::uint64_t x = base;
  for (std::uint64_t part : {static_cast<std::uint64_t>(graph_class), static_cast<std::uint64_t>(k),
                             static_cast<std::uint64_t>(rep)}) {
    x += 0x9e3779b97f4a7c15ULL + part;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x ^= x >> 31;
  }
  return x;
}

BenchRecord run_point(GraphClass graph_class, int k, std::uint64_t seed, const BenchConfig& config) {
  BenchRecord record;
  record.graph_class = graph_class;
  record.k = k;
  record.seed = seed;
  const HostGraph input = generate(graph_class, k, seed);
  record.nodes = input.node_count();
  record.edges = input.edge_count();
  record.oracle_weight = oracle_mst(input).total_weight;
  try {
    MstOptions options;
    options.seed = config.match_seed;
    options.step_limit = config.step_limit;
    const MstResult result = run_mst(input, options);
    record.wall_time_s = result.stats.wall_time_s;
    record.program_weight = result.total_weight;
    const auto violations = validate_end_state(input, result.graph);
    if (!violations.empty()) {
      record.failure = violations.front();
    } else if (record.program_weight != record.oracle_weight) {
      record.failure = "weight differs from the oracle";
    }
  } catch (const std::exception& e) {
    record.failure = e.what();
  }
  record.checks_passed = record.failure.empty();
  return record;
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config,
                                       const std::function<void(const BenchRecord&)>& progress) {
  if (config.reps < 1) throw std::invalid_argument("reps must be at least 1");
  std::vector<BenchRecord> records;
  for (const auto& series : config.series) {
    // One untimed run per series warms caches and the allocator.
    if (!series.sizes.empty()) {
      run_point(series.graph_class, series.sizes.front(), rep_seed(config.seed, series.graph_class, 0, 0), config);
    }
    for (int k : series.sizes) {
      for (int rep = 0; rep < config.reps; ++rep) {
        records.push_back(run_point(series.graph_class, k, rep_seed(config.seed, series.graph_class, k, rep), config));
        if (progress) progress(records.back());
      }
    }
  }
  return records;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records) {
  std::vector<BenchSummary> summaries;
  std::map<std::pair<GraphClass, int>, std::size_t> index;
  for (const auto& record : records) {
    const auto key = std::make_pair(record.graph_class, record.k);
    auto [it, fresh] = index.emplace(key, summaries.size());
    if (fresh) {
      BenchSummary summary;
      summary.graph_class = record.graph_class;
      summary.k = record.k;
      summary.nodes = record.nodes;
      summary.edges = record.edges;
      summary.min_s = record.wall_time_s;
      summary.max_s = record.wall_time_s;
      summary.all_passed = true;
      summaries.push_back(summary);
    }
    auto& summary = summaries[it->second];
    ++summary.reps;
    summary.mean_s += record.wall_time_s;
    summary.min_s = std::min(summary.min_s, record.wall_time_s);
    summary.max_s = std::max(summary.max_s, record.wall_time_s);
    summary.all_passed = summary.all_passed && record.checks_passed;
  }
  for (auto& summary : summaries) summary.mean_s /= summary.reps;
  return summaries;
}

std::string records_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "class,k,nodes,edges,seed,wall_time_s,oracle_weight,program_weight,checks_passed\n";
  for (const auto& r : records) {
    out << to_string(r.graph_class) << ',' << r.k << ',' << r.nodes << ',' << r.edges << ',' << r.seed << ','
        << r.wall_time_s << ',' << r.oracle_weight << ',' << r.program_weight << ','
        << (r.checks_passed ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<BenchSummary>& summaries) {
  std::ostringstream out;
  out << "class,k,nodes,edges,reps,mean_s,min_s,max_s,all_passed\n";
  for (const auto& s : summaries) {
    out << to_string(s.graph_class) << ',' << s.k << ',' << s.nodes << ',' << s.edges << ',' << s.reps << ','
        << s.mean_s << ',' << s.min_s << ',' << s.max_s << ',' << (s.all_passed ? "true" : "false") << '\n';
  }
  return out.str();
}

double fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least three points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [n, t] = points[i];
    if (n <= 0 || t <= 0) throw std::invalid_argument("slope fit needs positive values");
    if (i > 0 && n <= points[i - 1].first) throw std::invalid_argument("slope fit needs increasing sizes");
    const double x = std::log(n);
    const double y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double class_slope(const std::vector<BenchSummary>& summaries, GraphClass graph_class) {
  std::vector<std::pair<double, double>> points;
  for (const auto& s : summaries) {
    if (s.graph_class == graph_class) points.emplace_back(static_cast<double>(s.nodes), s.mean_s);
  }
  std::sort(points.begin(), points.end());
  return fit_loglog_slope(points);
}

}  // namespace rgt
