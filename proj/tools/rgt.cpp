#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "rgt/bench.hpp"
#include "rgt/mst.hpp"
#include "rgt/oracle.hpp"
#include "rgt/text.hpp"

namespace {

using namespace rgt;

GraphClass class_option(const std::string& text) {
  const auto parsed = parse_graph_class(text);
  if (!parsed) throw CLI::ValidationError("--class", "unknown graph class " + text);
  return *parsed;
}

std::string summary_line(const GraphSummary& s) {
  std::ostringstream out;
  out << "nodes=" << s.nodes << " edges=" << s.edges << " roots=" << s.roots;
  out << " cursor=" << (s.cursor_label ? to_string(*s.cursor_label) : "-");
  out << " node_marks=";
  for (std::size_t m = 0; m < kNodeMarkCount; ++m) {
    out << (m ? "/" : "") << s.node_marks[m];
  }
  out << " edge_marks=";
  for (std::size_t m = 0; m < kEdgeMarkCount; ++m) {
    out << (m ? "/" : "") << s.edge_marks[m];
  }
  return out.str();
}

int run_gen(const std::string& graph_class, int k, std::uint64_t seed, const std::string& out) {
  write_file(out, print_host(generate(class_option(graph_class), k, seed)) + "\n");
  return 0;
}

int run_program(const std::string& input_path, std::optional<std::uint64_t> seed, const std::string& out,
                bool trace, const std::string& program_path, std::uint64_t step_limit) {
  const HostGraph input = parse_host(read_file(input_path));
  ExecOptions options;
  options.seed = seed;
  options.step_limit = step_limit;

  if (program_path.empty()) check_mst_input(input);
  const LoadedProgram custom =
      program_path.empty() ? LoadedProgram{} : load(parse_program(read_file(program_path)));
  const LoadedProgram& program = program_path.empty() ? mst_boruvka_loaded() : custom;

  TracedResult result;
  if (trace) {
    const std::vector<std::string> markers = {"Preprocess", "Body", "TreesLoop", "GrowForest", "Rewind"};
    result = execute_traced(program, input, markers, options);
    for (const auto& entry : result.trace) {
      std::cerr << entry.procedure << ' ' << to_string(entry.event) << ' ' << summary_line(entry.summary) << '\n';
    }
  } else {
    auto run = execute(program, input, options);
    result.outcome = std::move(run.outcome);
    result.stats = std::move(run.stats);
  }
  std::cerr << "status=" << to_string(result.outcome.status)
            << " applications=" << result.stats.rule_applications
            << " attempts=" << result.stats.match_attempts << " time_s=" << result.stats.wall_time_s << '\n';
  if (result.outcome.status != Status::success) return 1;
  write_file(out, print_host(result.outcome.graph) + "\n");
  return 0;
}

int run_verify(const std::string& input_path, const std::string& result_path) {
  const HostGraph input = parse_host(read_file(input_path));
  const HostGraph result = parse_host(read_file(result_path));
  // Printed graphs use positional ids; the input's ids are 0..n-1 and the
  // result keeps them, so ids line up after parsing both files.
  const auto violations = validate_end_state(input, result);
  std::vector<EdgeId> blue;
  for (EdgeId e : input.edge_ids()) {
    if (result.contains(e) && result.mark(e) == EdgeMark::blue) blue.push_back(e);
  }
  const auto tree = verify_spanning_tree(input, blue);
  const auto oracle = oracle_mst(input);
  std::cout << "program_weight=" << tree.total_weight << " oracle_weight=" << oracle.total_weight << '\n';
  for (const auto& v : violations) std::cout << "violation: " << v << '\n';
  const bool ok = violations.empty() && tree.ok && tree.total_weight == oracle.total_weight;
  std::cout << (ok ? "OK" : "FAILED") << '\n';
  return ok ? 0 : 1;
}

int run_bench(const std::vector<std::string>& classes, const std::vector<int>& sizes, int reps,
              std::uint64_t seed, const std::string& csv, const std::string& summary_path, bool slopes,
              std::optional<std::uint64_t> match_seed, std::uint64_t step_limit) {
  BenchConfig config;
  config.reps = reps;
  config.seed = seed;
  config.match_seed = match_seed;
  config.step_limit = step_limit;
  for (const auto& name : classes) {
    const GraphClass graph_class = class_option(name);
    std::vector<int> chosen = sizes;
    if (chosen.empty()) {
      switch (graph_class) {
        case GraphClass::grid: chosen = {8, 16, 32, 64, 128}; break;
        case GraphClass::fixed_wheel: chosen = {4, 16, 64, 256}; break;
        case GraphClass::wheel: chosen = {64, 256, 1024, 2048}; break;
      }
    }
    config.series.push_back({graph_class, chosen});
  }
  const auto records = run_benchmark(config, [](const BenchRecord& r) {
    std::cerr << to_string(r.graph_class) << " k=" << r.k << " seed=" << r.seed << " time_s=" << r.wall_time_s
              << (r.checks_passed ? " ok" : " FAILED: " + r.failure) << '\n';
  });
  write_file(csv, records_csv(records));
  const auto summaries = summarize(records);
  const std::string table = summary_csv(summaries);
  if (summary_path.empty()) {
    std::cout << table;
  } else {
    write_file(summary_path, table);
  }
  if (slopes) {
    for (const auto& series : config.series) {
      try {
        std::cout << "slope " << to_string(series.graph_class) << ' ' << class_slope(summaries, series.graph_class)
                  << '\n';
      } catch (const std::invalid_argument& e) {
        std::cout << "slope " << to_string(series.graph_class) << " n/a (" << e.what() << ")\n";
      }
    }
  }
  const bool ok = std::all_of(records.begin(), records.end(), [](const BenchRecord& r) { return r.checks_passed; });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rooted graph transformation engine with a minimum spanning tree program"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a weighted benchmark graph");
  std::string gen_class;
  int gen_k = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--class", gen_class, "grid, fixedwheel or wheel")->required();
  gen->add_option("--k", gen_k, "Size parameter")->required();
  gen->add_option("--seed", gen_seed, "Weight and orientation seed");
  gen->add_option("--out", gen_out, "Output .host file")->required();

  auto* run = app.add_subcommand("run", "Run the MST program (or another program) on a host graph");
  std::string run_input;
  std::optional<std::uint64_t> run_seed;
  std::string run_out;
  bool run_trace = false;
  std::string run_program_path;
  std::uint64_t run_limit = 1'000'000'000;
  run->add_option("--input", run_input, "Input .host file")->required();
  run->add_option("--seed", run_seed, "Match-order seed; deterministic order when omitted");
  run->add_option("--out", run_out, "Result .host file")->required();
  run->add_flag("--trace", run_trace, "Print phase summaries to stderr");
  run->add_option("--program", run_program_path, "Run this .gpt program instead of the MST program");
  run->add_option("--step-limit", run_limit, "Rule application budget");

  auto* verify = app.add_subcommand("verify", "Check a result against the input and the oracle");
  std::string verify_input;
  std::string verify_result;
  verify->add_option("--input", verify_input, "Input .host file")->required();
  verify->add_option("--result", verify_result, "Result .host file")->required();

  auto* bench = app.add_subcommand("bench", "Time the MST program on generated graphs");
  std::vector<std::string> bench_classes;
  std::vector<int> bench_sizes;
  int bench_reps = 5;
  std::uint64_t bench_seed = 1;
  std::string bench_csv;
  std::string bench_summary;
  bool bench_slopes = false;
  std::optional<std::uint64_t> bench_match_seed;
  std::uint64_t bench_limit = 1'000'000'000;
  bench->add_option("--classes", bench_classes, "Graph classes")->required()->delimiter(',');
  bench->add_option("--sizes", bench_sizes, "Sizes k for every class (default: per class)")->delimiter(',');
  bench->add_option("--reps", bench_reps, "Repetitions per size");
  bench->add_option("--seed", bench_seed, "Base seed for the generated graphs");
  bench->add_option("--csv", bench_csv, "Per-run CSV output")->required();
  bench->add_option("--summary", bench_summary, "Per-size summary CSV (stdout when omitted)");
  bench->add_flag("--slopes", bench_slopes, "Print log-log slopes per class");
  bench->add_option("--match-seed", bench_match_seed, "Match-order seed for the engine");
  bench->add_option("--step-limit", bench_limit, "Rule application budget per run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_gen(gen_class, gen_k, gen_seed, gen_out);
    if (*run) return run_program(run_input, run_seed, run_out, run_trace, run_program_path, run_limit);
    if (*verify) return run_verify(verify_input, verify_result);
    if (*bench) {
      return run_bench(bench_classes, bench_sizes, bench_reps, bench_seed, bench_csv, bench_summary, bench_slopes,
                       bench_match_seed, bench_limit);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
