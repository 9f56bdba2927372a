#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rgt/bench.hpp"
#include "rgt/matcher.hpp"
#include "rgt/mst.hpp"
#include "rgt/oracle.hpp"
#include "rgt/text.hpp"
#include "support/brute_force.hpp"
#include "support/properties.hpp"
#include "support/random_graphs.hpp"

namespace {

using namespace rgt;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr int kWeightSeeds = 20;
constexpr double kSweepBudgetS = 300.0;
constexpr std::size_t kCasesPerProperty = 1200;  // nine properties
constexpr std::size_t kMinPropertyCases = 10'000;
constexpr double kPropertyBudgetS = 120.0;
constexpr int kSlopeReps = 5;
constexpr double kNearLinearLow = 0.9;
constexpr double kNearLinearHigh = 1.40;
constexpr double kWheelMinSlope = 1.5;
constexpr double kWheelMinGap = 0.3;
constexpr double kAnchoredMaxRatio = 3.0;
constexpr int kAnchoredBatch = 200;
constexpr int kMatchOrderSeeds = 5;
constexpr int kGeneratedRoundTrips = 2000;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

struct Sweep {
  std::size_t runs = 0;
  std::size_t weight_mismatches = 0;
  std::size_t end_state_violations = 0;
  std::size_t errors = 0;
  std::string first_problem;
  double seconds = 0;
};

// grid k 2..8, wheel k 3..32, fixedWheel k 1..8, each with kWeightSeeds
// weight seeds. Weights are compared with both the oracle and an
// independent Kruskal.
Sweep run_sweep(std::optional<std::uint64_t> match_seed) {
  Sweep sweep;
  const auto start = Clock::now();
  const auto note = [&](const std::string& problem) {
    if (sweep.first_problem.empty()) sweep.first_problem = problem;
  };
  const std::vector<std::pair<GraphClass, std::pair<int, int>>> ranges{
      {GraphClass::grid, {2, 8}}, {GraphClass::wheel, {3, 32}}, {GraphClass::fixed_wheel, {1, 8}}};
  for (const auto& [graph_class, range] : ranges) {
    for (int k = range.first; k <= range.second; ++k) {
      for (int s = 0; s < kWeightSeeds; ++s) {
        ++sweep.runs;
        const std::uint64_t seed = rep_seed(1, graph_class, k, s);
        const HostGraph input = generate(graph_class, k, seed);
        const std::string where = std::string(to_string(graph_class)) + " k=" + std::to_string(k) +
                                  " seed=" + std::to_string(seed);
        try {
          MstOptions options;
          options.seed = match_seed;
          const MstResult result = run_mst(input, options);
          const std::int64_t oracle = oracle_mst(input).total_weight;
          if (oracle != rgt::testing::kruskal_weight(input) || result.total_weight != oracle) {
            ++sweep.weight_mismatches;
            note(where + ": weight " + std::to_string(result.total_weight) + " vs " + std::to_string(oracle));
          }
          const auto violations = validate_end_state(input, result.graph);
          if (!violations.empty()) {
            sweep.end_state_violations += violations.size();
            note(where + ": " + violations.front());
          }
        } catch (const std::exception& e) {
          ++sweep.errors;
          note(where + ": " + e.what());
        }
      }
    }
  }
  sweep.seconds = seconds_since(start);
  return sweep;
}

std::string describe(const Sweep& sweep) {
  std::ostringstream out;
  out << sweep.runs << " runs, " << sweep.weight_mismatches << " weight mismatches, "
      << sweep.end_state_violations << " end-state violations, " << sweep.errors << " errors, "
      << sweep.seconds << " s";
  if (!sweep.first_problem.empty()) out << "; first: " << sweep.first_problem;
  return out.str();
}

bool sweep_weights_ok(const Sweep& sweep) {
  return sweep.weight_mismatches == 0 && sweep.errors == 0 && sweep.seconds < kSweepBudgetS;
}

bool sweep_end_state_ok(const Sweep& sweep) { return sweep.end_state_violations == 0 && sweep.errors == 0; }

void criterion_3() {
  const auto start = Clock::now();
  const auto reports = rgt::testing::engine_semantics_suite(20261016, kCasesPerProperty);
  const double seconds = seconds_since(start);
  std::size_t cases = 0;
  std::size_t counterexamples = 0;
  std::ostringstream detail;
  for (const auto& r : reports) {
    cases += r.cases;
    counterexamples += r.counterexample_count;
    if (!r.ok()) detail << "; " << r.name << ": " << r.counterexamples.front();
  }
  const bool pass = cases >= kMinPropertyCases && counterexamples == 0 && seconds < kPropertyBudgetS;
  report(3, pass,
         std::to_string(reports.size()) + " properties, " + std::to_string(cases) + " cases, " +
             std::to_string(counterexamples) + " counterexamples, " + std::to_string(seconds) + " s" +
             detail.str());
}

std::vector<BenchSummary> bench(GraphClass graph_class, std::vector<int> sizes) {
  BenchConfig config;
  config.series = {{graph_class, std::move(sizes)}};
  config.reps = kSlopeReps;
  const auto records = run_benchmark(config);
  for (const auto& r : records) {
    if (!r.checks_passed) throw std::runtime_error(std::string(to_string(graph_class)) + ": " + r.failure);
  }
  return summarize(records);
}

std::string means(const std::vector<BenchSummary>& summaries) {
  std::ostringstream out;
  for (const auto& s : summaries) out << " n=" << s.nodes << ":" << s.mean_s << "s";
  return out.str();
}

void criteria_4_5(bool want4, bool want5) {
  try {
    const auto grid = bench(GraphClass::grid, {8, 16, 32, 64, 128});
    const double grid_slope = class_slope(grid, GraphClass::grid);
    std::ostringstream g;
    g << "grid slope " << grid_slope << " [" << means(grid) << " ]";
    if (want4) {
      const auto fixed = bench(GraphClass::fixed_wheel, {4, 16, 64, 256});
      const double fixed_slope = class_slope(fixed, GraphClass::fixed_wheel);
      const auto near_linear = [](double s) { return s >= kNearLinearLow && s <= kNearLinearHigh; };
      const bool in_band = near_linear(grid_slope) && near_linear(fixed_slope);
      std::ostringstream f;
      f << g.str() << ", fixedWheel slope " << fixed_slope << " [" << means(fixed) << " ], band ["
        << kNearLinearLow << ", " << kNearLinearHigh << "]";
      report(4, in_band, f.str());
    }
    if (want5) {
      const auto wheel = bench(GraphClass::wheel, {64, 256, 1024, 2048});
      const double wheel_slope = class_slope(wheel, GraphClass::wheel);
      std::ostringstream w;
      w << "wheel slope " << wheel_slope << " [" << means(wheel) << " ], " << g.str() << ", need >= "
        << kWheelMinSlope << " and >= grid + " << kWheelMinGap;
      report(5, wheel_slope >= kWheelMinSlope && wheel_slope >= grid_slope + kWheelMinGap, w.str());
    }
  } catch (const std::exception& e) {
    if (want4) report(4, false, e.what());
    if (want5) report(5, false, e.what());
  }
}

// Mean time of one find_match of root_current, measured on every graph the
// program holds when TreesLoop starts, i.e. when the rule is about to run.
struct Anchored {
  double mean_s = 0;
  std::size_t samples = 0;
  std::size_t misses = 0;
};

Anchored anchored_root_current(int k) {
  const LoadedProgram& program = mst_boruvka_loaded();
  const RuleInstance& instance = program.rules().at(*program.rule_index("root_current")).instances.at(0);
  Anchored result;
  double total = 0;
  ExecOptions options;
  options.step_limit = 1'000'000'000;
  options.markers = {"TreesLoop"};
  options.observer = [&](std::string_view, PhaseEvent event, const HostGraph& graph) {
    if (event != PhaseEvent::entry) return;
    const auto start = Clock::now();
    std::size_t found = 0;
    for (int i = 0; i < kAnchoredBatch; ++i) found += find_match(instance, graph).has_value() ? 1 : 0;
    total += seconds_since(start) / kAnchoredBatch;
    ++result.samples;
    if (found != static_cast<std::size_t>(kAnchoredBatch)) ++result.misses;
  };
  const HostGraph input = make_grid(k, rep_seed(1, GraphClass::grid, k, 0));
  const ExecResult run = execute(program, input, options);
  if (run.outcome.status != Status::success) throw std::runtime_error("program did not finish");
  result.mean_s = result.samples ? total / static_cast<double>(result.samples) : 0;
  return result;
}

void criterion_6() {
  try {
    // One discarded pass warms the caches.
    anchored_root_current(8);
    const Anchored small = anchored_root_current(8);
    const Anchored large = anchored_root_current(128);
    const double ratio = std::max(small.mean_s, large.mean_s) / std::min(small.mean_s, large.mean_s);
    std::ostringstream out;
    out << "k=8 mean " << small.mean_s * 1e9 << " ns over " << small.samples << " starts, k=128 mean "
        << large.mean_s * 1e9 << " ns over " << large.samples << " starts, ratio " << ratio << " (limit "
        << kAnchoredMaxRatio << ")";
    const bool pass = small.samples > 0 && large.samples > 0 && small.misses == 0 && large.misses == 0 &&
                      ratio < kAnchoredMaxRatio;
    if (small.misses + large.misses > 0) out << ", " << small.misses + large.misses << " starts without a match";
    report(6, pass, out.str());
  } catch (const std::exception& e) {
    report(6, false, e.what());
  }
}

void criterion_7() {
  bool pass = true;
  std::ostringstream out;
  for (int seed = 1; seed <= kMatchOrderSeeds; ++seed) {
    const Sweep sweep = run_sweep(static_cast<std::uint64_t>(seed));
    const bool ok = sweep_weights_ok(sweep) && sweep_end_state_ok(sweep);
    pass = pass && ok;
    out << (seed > 1 ? "; " : "") << "seed " << seed << ": " << (ok ? "ok" : describe(sweep)) << " ("
        << sweep.runs << " runs, " << sweep.seconds << " s)";
  }
  report(7, pass, out.str());
}

void criterion_8() {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  const auto host_round_trip = [&](const HostGraph& g, const std::string& what) {
    ++checked;
    const std::string printed = print_host(g);
    const HostGraph again = parse_host(printed);
    if (!(again == g) || print_host(again) != printed) problems.push_back(what);
  };
  const auto program_round_trip = [&](const Program& p, const std::string& what) {
    ++checked;
    const std::string printed = print_program(p);
    const Program again = parse_program(printed);
    if (!(again == p) || print_program(again) != printed) problems.push_back(what);
  };
  try {
    const std::string fixtures = std::string(RGT_SOURCE_DIR) + "/fixtures";
    std::set<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(fixtures)) paths.insert(entry.path());
    for (const auto& path : paths) {
      if (path.extension() == ".host") host_round_trip(parse_host(read_file(path.string())), path.filename());
      if (path.extension() == ".gpt") program_round_trip(parse_program(read_file(path.string())), path.filename());
    }
    program_round_trip(parse_program(mst_boruvka_source()), "mst program");
    for (GraphClass graph_class : {GraphClass::grid, GraphClass::fixed_wheel, GraphClass::wheel}) {
      for (int k : {3, 4, 8, 16}) {
        host_round_trip(generate(graph_class, k, 7), std::string(to_string(graph_class)) + std::to_string(k));
      }
    }
    rgt::testing::Rng rng(8);
    for (int c = 0; c < kGeneratedRoundTrips; ++c) {
      const HostGraph host = rgt::testing::random_host(rng);
      host_round_trip(host, "random host " + std::to_string(c));
      const std::vector<Rule> rules{rgt::testing::random_rule(rng, "r0"),
                                    rgt::testing::planted_rule(rng, host, "r1")};
      program_round_trip(rgt::testing::random_program(rng, rules, 3), "random program " + std::to_string(c));
    }
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  std::string detail = std::to_string(checked) + " round trips, " + std::to_string(problems.size()) + " failures";
  if (!problems.empty()) detail += "; first: " + problems.front();
  report(8, problems.empty(), detail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks; prints one PASS/FAIL line per criterion."};
  std::vector<int> only;
  app.add_option("--only", only, "Run just these criteria (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);
  const auto wanted = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };

  if (wanted(1) || wanted(2)) {
    const Sweep sweep = run_sweep(std::nullopt);
    if (wanted(1)) {
      report(1, sweep_weights_ok(sweep), describe(sweep) + " (budget " + std::to_string(kSweepBudgetS) + " s)");
    }
    if (wanted(2)) report(2, sweep_end_state_ok(sweep), describe(sweep));
  }
  if (wanted(3)) criterion_3();
  if (wanted(4) || wanted(5)) criteria_4_5(wanted(4), wanted(5));
  if (wanted(6)) criterion_6();
  if (wanted(7)) criterion_7();
  if (wanted(8)) criterion_8();
  return failures == 0 ? 0 : 1;
}
