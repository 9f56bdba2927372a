#include "rgt/interpreter.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <unordered_map>

#include "rgt/matcher.hpp"

namespace rgt {

Command Command::rule_set(std::vector<std::string> rules) {
  Command c;
  c.kind = Kind::rule_set;
  c.names = std::move(rules);
  return c;
}

Command Command::call(std::string name) {
  Command c;
  c.kind = Kind::call;
  c.names.push_back(std::move(name));
  return c;
}

Command Command::sequence(std::vector<Command> steps) {
  Command c;
  c.kind = Kind::sequence;
  c.children = std::move(steps);
  return c;
}

Command Command::if_then_else(Command condition, Command then_branch, Command else_branch) {
  Command c;
  c.kind = Kind::if_then_else;
  c.children = {std::move(condition), std::move(then_branch), std::move(else_branch)};
  return c;
}

Command Command::try_then_else(Command condition, Command then_branch, Command else_branch) {
  Command c;
  c.kind = Kind::try_then_else;
  c.children = {std::move(condition), std::move(then_branch), std::move(else_branch)};
  return c;
}

Command Command::loop(Command body) {
  Command c;
  c.kind = Kind::loop;
  c.children.push_back(std::move(body));
  return c;
}

Command Command::break_loop() {
  Command c;
  c.kind = Kind::break_loop;
  return c;
}

Command Command::skip() { return Command{}; }

std::optional<std::size_t> LoadedProgram::rule_index(std::string_view name) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].name == name) return i;
  }
  return std::nullopt;
}

namespace {

using Node = LoadedProgram::Node;

struct Resolver {
  std::unordered_map<std::string, std::size_t> rules;
  std::unordered_map<std::string, const Command*> procedures;
  std::vector<std::string> stack;

  Node resolve(const Command& command, bool break_allowed) {
    Node node;
    switch (command.kind) {
      case Command::Kind::rule_set:
        if (command.names.empty()) throw LoadError("empty rule set");
        node.kind = Node::Kind::rule_set;
        for (const auto& name : command.names) {
          const auto it = rules.find(name);
          if (it == rules.end()) throw LoadError("unknown rule " + name + " in a rule set");
          node.rules.push_back(it->second);
        }
        return node;
      case Command::Kind::call: {
        const auto& name = command.names.at(0);
        if (const auto it = rules.find(name); it != rules.end()) {
          node.kind = Node::Kind::rule_set;
          node.rules.push_back(it->second);
          return node;
        }
        const auto it = procedures.find(name);
        if (it == procedures.end()) throw LoadError("unknown rule or procedure " + name);
        if (std::find(stack.begin(), stack.end(), name) != stack.end()) {
          throw LoadError("procedure " + name + " is recursive");
        }
        stack.push_back(name);
        node.kind = Node::Kind::procedure;
        node.procedure = name;
        node.children.push_back(resolve(*it->second, break_allowed));
        stack.pop_back();
        return node;
      }
      case Command::Kind::sequence:
        node.kind = Node::Kind::sequence;
        for (const auto& child : command.children) node.children.push_back(resolve(child, break_allowed));
        return node;
      case Command::Kind::if_then_else:
      case Command::Kind::try_then_else:
        node.kind = command.kind == Command::Kind::if_then_else ? Node::Kind::if_then_else
                                                                 : Node::Kind::try_then_else;
        node.children.push_back(resolve(command.children.at(0), false));
        node.children.push_back(resolve(command.children.at(1), break_allowed));
        node.children.push_back(resolve(command.children.at(2), break_allowed));
        return node;
      case Command::Kind::loop:
        node.kind = Node::Kind::loop;
        node.children.push_back(resolve(command.children.at(0), true));
        return node;
      case Command::Kind::break_loop:
        if (!break_allowed) throw LoadError("break outside of a loop");
        node.kind = Node::Kind::break_loop;
        return node;
      case Command::Kind::skip:
        node.kind = Node::Kind::skip;
        return node;
    }
    throw LoadError("bad command");
  }
};

}  // namespace

LoadedProgram load(const Program& program) {
  LoadedProgram loaded;
  Resolver resolver;
  for (const auto& rule : program.rules) {
    if (!resolver.rules.emplace(rule.name, loaded.rules_.size()).second) {
      throw LoadError("duplicate rule " + rule.name);
    }
    try {
      loaded.rules_.push_back(compile_rule(rule));
    } catch (const RuleError& e) {
      throw LoadError(e.what());
    }
  }
  for (const auto& procedure : program.procedures) {
    if (resolver.rules.count(procedure.name)) {
      throw LoadError(procedure.name + " names both a rule and a procedure");
    }
    if (!resolver.procedures.emplace(procedure.name, &procedure.body).second) {
      throw LoadError("duplicate procedure " + procedure.name);
    }
  }
  if (!resolver.procedures.count("Main")) throw LoadError("program has no Main procedure");
  loaded.main_ = resolver.resolve(Command::call("Main"), false);
  return loaded;
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::success: return "success";
    case Status::fail: return "fail";
    case Status::limit: return "limit";
  }
  return "?";
}

std::string_view to_string(PhaseEvent event) {
  switch (event) {
    case PhaseEvent::entry: return "entry";
    case PhaseEvent::exit: return "exit";
    case PhaseEvent::fail: return "fail";
  }
  return "?";
}

namespace {

enum class Flow { ok, fail, broke, limit };

class Executor {
 public:
  Executor(const LoadedProgram& program, HostGraph& graph, const ExecOptions& options)
      : program_(program),
        graph_(graph),
        options_(options),
        counters_(program.rules().size()),
        markers_(options.markers.begin(), options.markers.end()) {
    match_options_.scratch = &scratch_;
    if (options.seed) {
      rng_.seed(*options.seed);
      match_options_.shuffle = &rng_;
    }
  }

  Flow run(const Node& node) {
    switch (node.kind) {
      case Node::Kind::rule_set:
        return call_rules(node.rules);
      case Node::Kind::procedure: {
        const bool watched = options_.observer && markers_.count(node.procedure);
        if (watched) options_.observer(node.procedure, PhaseEvent::entry, graph_);
        const Flow flow = run(node.children.front());
        if (watched && flow != Flow::limit) {
          options_.observer(node.procedure, flow == Flow::fail ? PhaseEvent::fail : PhaseEvent::exit,
                            graph_);
        }
        return flow;
      }
      case Node::Kind::sequence:
        for (const auto& child : node.children) {
          if (const Flow flow = run(child); flow != Flow::ok) return flow;
        }
        return Flow::ok;
      case Node::Kind::if_then_else: {
        const auto token = graph_.snapshot();
        const Flow flow = run(node.children[0]);
        graph_.restore(token);
        if (flow == Flow::limit) return flow;
        return run(node.children[flow == Flow::ok ? 1 : 2]);
      }
      case Node::Kind::try_then_else: {
        const auto token = graph_.snapshot();
        const Flow flow = run(node.children[0]);
        if (flow == Flow::ok) {
          graph_.discard(token);
          return run(node.children[1]);
        }
        graph_.restore(token);
        if (flow == Flow::limit) return flow;
        return run(node.children[2]);
      }
      case Node::Kind::loop:
        return run_loop(node.children.front());
      case Node::Kind::break_loop:
        return Flow::broke;
      case Node::Kind::skip:
        return Flow::ok;
    }
    return Flow::fail;
  }

  void finish(ExecStats& stats) const {
    for (std::size_t i = 0; i < counters_.size(); ++i) {
      stats.per_rule[program_.rules()[i].name] = counters_[i];
    }
    stats.rule_applications = applications_;
    stats.match_attempts = attempts_;
    stats.steps = steps_;
  }

 private:
  Flow run_loop(const Node& body) {
    for (;;) {
      const auto token = graph_.snapshot();
      const std::uint64_t before = applications_;
      const Flow flow = run(body);
      switch (flow) {
        case Flow::ok:
          graph_.discard(token);
          // An iteration that applied nothing would repeat forever.
          if (applications_ == before) {
            if (steps_ >= options_.step_limit) return Flow::limit;
            ++steps_;
          }
          continue;
        case Flow::fail:
          graph_.restore(token);
          return Flow::ok;
        case Flow::broke:
          graph_.discard(token);
          return Flow::ok;
        case Flow::limit:
          graph_.restore(token);
          return Flow::limit;
      }
    }
  }

  Flow call_rules(const std::vector<std::size_t>& rules) {
    const auto& sets = program_.rules();
    if (!match_options_.shuffle) {
      for (std::size_t r : rules) {
        for (const auto& instance : sets[r].instances) {
          if (const auto flow = try_instance(r, instance)) return *flow;
        }
      }
      return Flow::fail;
    }
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t r : rules) {
      for (std::size_t i = 0; i < sets[r].instances.size(); ++i) order.emplace_back(r, i);
    }
    std::shuffle(order.begin(), order.end(), rng_);
    for (const auto& [r, i] : order) {
      if (const auto flow = try_instance(r, sets[r].instances[i])) return *flow;
    }
    return Flow::fail;
  }

  std::optional<Flow> try_instance(std::size_t r, const RuleInstance& instance) {
    ++attempts_;
    ++counters_[r].attempts;
    auto match = find_match(instance, graph_, match_options_);
    if (!match) return std::nullopt;
    if (steps_ >= options_.step_limit) return Flow::limit;
    apply(instance, *match, graph_);
    ++steps_;
    ++applications_;
    ++counters_[r].applications;
    return Flow::ok;
  }

  const LoadedProgram& program_;
  HostGraph& graph_;
  const ExecOptions& options_;
  std::vector<RuleCounters> counters_;
  std::set<std::string, std::less<>> markers_;
  std::mt19937_64 rng_;
  MatchOptions match_options_;
  Match scratch_;
  std::uint64_t applications_ = 0;
  std::uint64_t attempts_ = 0;
  std::uint64_t steps_ = 0;
};

}  // namespace

ExecResult execute(const LoadedProgram& program, const HostGraph& input, const ExecOptions& options) {
  ExecResult result;
  result.outcome.graph = input;
  const auto started = std::chrono::steady_clock::now();
  Executor executor(program, result.outcome.graph, options);
  const Flow flow = executor.run(program.main());
  result.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  executor.finish(result.stats);
  switch (flow) {
    case Flow::ok:
    case Flow::broke:
      result.outcome.status = Status::success;
      break;
    case Flow::fail:
      result.outcome.status = Status::fail;
      result.outcome.graph = input;
      break;
    case Flow::limit:
      result.outcome.status = Status::limit;
      result.outcome.graph = input;
      break;
  }
  return result;
}

GraphSummary summarize(const HostGraph& graph) {
  GraphSummary summary;
  summary.nodes = graph.node_count();
  summary.edges = graph.edge_count();
  summary.roots = graph.root_count();
  for (NodeId v : graph.node_ids()) ++summary.node_marks[static_cast<std::size_t>(graph.mark(v))];
  for (EdgeId e : graph.edge_ids()) ++summary.edge_marks[static_cast<std::size_t>(graph.mark(e))];
  for (NodeId v : graph.roots(NodeMark::none)) {
    summary.cursor_label = graph.label(v);
    break;
  }
  return summary;
}

TracedResult execute_traced(const LoadedProgram& program, const HostGraph& input,
                            const std::vector<std::string>& markers, ExecOptions options) {
  TracedResult result;
  options.markers = markers;
  auto user_observer = std::move(options.observer);
  options.observer = [&](std::string_view procedure, PhaseEvent event, const HostGraph& graph) {
    result.trace.push_back({std::string(procedure), event, summarize(graph)});
    if (user_observer) user_observer(procedure, event, graph);
  };
  auto run = execute(program, input, options);
  result.outcome = std::move(run.outcome);
  result.stats = std::move(run.stats);
  return result;
}

}  // namespace rgt
