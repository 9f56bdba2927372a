#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rgt/graph.hpp"
#include "rgt/interpreter.hpp"

namespace rgt {

enum class GraphClass : std::uint8_t { grid, fixed_wheel, wheel };

std::string_view to_string(GraphClass graph_class);
// Accepts grid, fixedwheel (or fixed_wheel) and wheel.
std::optional<GraphClass> parse_graph_class(std::string_view text);

// Weights are uniform in [1, 1000]; every edge gets a random direction.
// k x k grid: k^2 nodes, 2k(k-1) edges.
HostGraph make_grid(int k, std::uint64_t seed);
// Hub with 16 spokes, each a path of k edges, whose ends form a 16-cycle:
// 16k+1 nodes, 16k+16 edges.
HostGraph make_fixed_wheel(int k, std::uint64_t seed);
// Hub joined to every node of a k-cycle: k+1 nodes, 2k edges; k >= 3.
HostGraph make_wheel(int k, std::uint64_t seed);
HostGraph generate(GraphClass graph_class, int k, std::uint64_t seed);

struct BenchSeries {
  GraphClass graph_class;
  std::vector<int> sizes;
};

struct BenchConfig {
  std::vector<BenchSeries> series;
  int reps = 5;
  std::uint64_t seed = 1;
  std::uint64_t step_limit = 1'000'000'000;
  // Match-order seed for the engine; deterministic order when unset.
  std::optional<std::uint64_t> match_seed;
};

struct BenchRecord {
  GraphClass graph_class = GraphClass::grid;
  int k = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0;
  std::int64_t oracle_weight = 0;
  std::int64_t program_weight = 0;
  bool checks_passed = false;
  std::string failure;
};

struct BenchSummary {
  GraphClass graph_class = GraphClass::grid;
  int k = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  int reps = 0;
  double mean_s = 0;
  double min_s = 0;
  double max_s = 0;
  bool all_passed = false;
};

// Seed of one repetition, derived from the base seed.
std::uint64_t rep_seed(std::uint64_t base, GraphClass graph_class, int k, int rep);

// Runs one repetition: generate, solve with the oracle and the program, check.
BenchRecord run_point(GraphClass graph_class, int k, std::uint64_t seed, const BenchConfig& config);

std::vector<BenchRecord> run_benchmark(const BenchConfig& config,
                                       const std::function<void(const BenchRecord&)>& progress = {});

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records);

std::string records_csv(const std::vector<BenchRecord>& records);
std::string summary_csv(const std::vector<BenchSummary>& summaries);

// Least squares slope of log t against log n. Needs at least three points
// with strictly increasing n and positive values.
double fit_loglog_slope(std::span<const std::pair<double, double>> points);

// Slope of mean time against node count for one class.
double class_slope(const std::vector<BenchSummary>& summaries, GraphClass graph_class);

}  // namespace rgt
