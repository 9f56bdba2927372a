#include "rgt/text.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace rgt {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  enum class Kind { ident, integer, string, symbol, end };
  Kind kind = Kind::end;
  std::string text;
  std::int64_t value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string describe(const Token& token) {
  switch (token.kind) {
    case Token::Kind::end: return "end of input";
    case Token::Kind::string: return "string \"" + token.text + "\"";
    default: return "'" + token.text + "'";
  }
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  const auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  const auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      const auto close = text.find("*/", i + 2);
      if (close == std::string_view::npos) throw ParseError(line, column, "unterminated comment");
      advance(close + 2 - i);
      continue;
    }
    Token token;
    token.line = line;
    token.column = column;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      token.kind = Token::Kind::ident;
      token.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      token.kind = Token::Kind::integer;
      token.text = std::string(text.substr(i, j - i));
      const auto [end, error] = std::from_chars(text.data() + i, text.data() + j, token.value);
      if (error != std::errc() || end != text.data() + j) {
        throw ParseError(line, column, "integer out of range: " + token.text);
      }
      advance(j - i);
    } else if (c == '"') {
      token.kind = Token::Kind::string;
      std::size_t j = i + 1;
      for (;; ++j) {
        if (j >= text.size() || text[j] == '\n') throw ParseError(line, column, "unterminated string");
        if (text[j] == '"') break;
        if (text[j] == '\\') {
          ++j;
          if (j >= text.size() || (text[j] != '"' && text[j] != '\\')) {
            throw ParseError(line, column, "bad escape in string");
          }
        }
        token.text += text[j];
      }
      advance(j + 1 - i);
    } else {
      static constexpr std::string_view kPairs[] = {"->", "--", "<=", ">=", "!=", "=="};
      static constexpr std::string_view kSingles = "[](){},;:#|=!+-*<>";
      token.kind = Token::Kind::symbol;
      for (auto pair : kPairs) {
        if (text.substr(i, 2) == pair) token.text = std::string(pair);
      }
      if (token.text.empty()) {
        if (kSingles.find(c) == std::string_view::npos) {
          throw ParseError(line, column, std::string("unexpected character '") + c + "'");
        }
        token.text = std::string(1, c);
      }
      advance(token.text.size());
    }
    tokens.push_back(std::move(token));
  }
  Token end;
  end.line = line;
  end.column = column;
  tokens.push_back(end);
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

 protected:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& token = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return token;
  }
  bool at_symbol(std::string_view symbol, std::size_t ahead = 0) const {
    const auto& token = peek(ahead);
    return token.kind == Token::Kind::symbol && token.text == symbol;
  }
  bool at_keyword(std::string_view word, std::size_t ahead = 0) const {
    const auto& token = peek(ahead);
    return token.kind == Token::Kind::ident && token.text == word;
  }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  bool accept(std::string_view symbol) {
    if (!at_symbol(symbol)) return false;
    next();
    return true;
  }
  bool accept_keyword(std::string_view word) {
    if (!at_keyword(word)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const Token& token, const std::string& message) const {
    throw ParseError(token.line, token.column, message);
  }
  void expect(std::string_view symbol) {
    if (!accept(symbol)) fail(peek(), "expected '" + std::string(symbol) + "' but found " + describe(peek()));
  }
  void expect_keyword(std::string_view word) {
    if (!accept_keyword(word)) fail(peek(), "expected '" + std::string(word) + "' but found " + describe(peek()));
  }
  std::string expect_ident(const char* what) {
    if (peek().kind != Token::Kind::ident) fail(peek(), std::string("expected ") + what + " but found " + describe(peek()));
    return next().text;
  }
  // Node and edge names may be identifiers or integers.
  std::string expect_name(const char* what) {
    const auto kind = peek().kind;
    if (kind != Token::Kind::ident && kind != Token::Kind::integer) {
      fail(peek(), std::string("expected ") + what + " but found " + describe(peek()));
    }
    return next().text;
  }
  void expect_end() {
    if (!at_end()) fail(peek(), "unexpected " + describe(peek()));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

class HostParser : public Parser {
 public:
  using Parser::Parser;

  HostGraph parse() {
    HostGraph graph;
    expect("[");
    while (!at_symbol("|")) {
      if (at_end()) fail(peek(), "expected '|' but found end of input");
      parse_node(graph);
    }
    expect("|");
    std::unordered_map<std::string, bool> edge_names;
    while (!at_symbol("]")) {
      if (at_end()) fail(peek(), "expected ']' but found end of input");
      parse_edge(graph, edge_names);
    }
    expect("]");
    expect_end();
    return graph;
  }

 private:
  void parse_node(HostGraph& graph) {
    expect("(");
    const Token& at = peek();
    const std::string name = expect_name("a node name");
    bool root = false;
    if (accept("(")) {
      if (!accept_keyword("R")) fail(peek(), "expected 'R' in a root marker");
      expect(")");
      root = true;
    }
    expect(",");
    Label label = parse_label();
    NodeMark mark = NodeMark::none;
    if (accept("#")) {
      const Token& word = peek();
      const auto parsed = parse_node_mark(expect_ident("a node mark"));
      if (!parsed || *parsed == NodeMark::none) fail(word, "unknown node mark '" + word.text + "'");
      mark = *parsed;
    }
    expect(")");
    if (!nodes_.emplace(name, graph.add_node(std::move(label), mark, root)).second) {
      fail(at, "duplicate node name " + name);
    }
  }

  void parse_edge(HostGraph& graph, std::unordered_map<std::string, bool>& edge_names) {
    expect("(");
    const Token& at = peek();
    const std::string name = expect_name("an edge name");
    if (!edge_names.emplace(name, true).second) fail(at, "duplicate edge name " + name);
    expect(",");
    const NodeId source = endpoint();
    expect(",");
    const NodeId target = endpoint();
    expect(",");
    Label label = parse_label();
    EdgeMark mark = EdgeMark::none;
    if (accept("#")) {
      const Token& word = peek();
      const auto parsed = parse_edge_mark(expect_ident("an edge mark"));
      if (!parsed || *parsed == EdgeMark::none) fail(word, "unknown edge mark '" + word.text + "'");
      mark = *parsed;
    }
    expect(")");
    graph.add_edge(source, target, std::move(label), mark);
  }

  NodeId endpoint() {
    const Token& at = peek();
    const std::string name = expect_name("a node name");
    const auto it = nodes_.find(name);
    if (it == nodes_.end()) fail(at, "edge endpoint " + name + " is not a node");
    return it->second;
  }

  Label parse_label() {
    if (accept_keyword("empty")) return {};
    Label label;
    do {
      const bool negative = accept("-");
      const Token& token = next();
      if (token.kind == Token::Kind::integer) {
        label.emplace_back(negative ? -token.value : token.value);
      } else if (token.kind == Token::Kind::string && !negative) {
        label.emplace_back(token.text);
      } else {
        fail(token, "expected a label atom but found " + describe(token));
      }
    } while (accept(":"));
    return label;
  }

  std::unordered_map<std::string, NodeId> nodes_;
};

class ProgramParser : public Parser {
 public:
  using Parser::Parser;

  Program parse() {
    Program program;
    while (!at_end()) {
      if (at_keyword("rule")) {
        program.rules.push_back(parse_rule());
        continue;
      }
      const Token& at = peek();
      Procedure procedure;
      procedure.name = expect_ident("a declaration");
      if (is_keyword(procedure.name)) fail(at, "'" + procedure.name + "' is reserved");
      expect("=");
      procedure.body = parse_command();
      if (!at_end() && !(peek().kind == Token::Kind::ident && at_symbol("=", 1)) && !at_keyword("rule")) {
        fail(peek(), "unexpected " + describe(peek()) + " after a command");
      }
      program.procedures.push_back(std::move(procedure));
    }
    return program;
  }

 private:
  static bool is_keyword(std::string_view word) {
    static constexpr std::string_view kKeywords[] = {
        "rule", "lhs", "rhs", "interface", "where", "if", "then", "else", "try", "break",
        "skip", "and", "or", "not", "int", "list", "empty"};
    for (auto keyword : kKeywords) {
      if (word == keyword) return true;
    }
    return false;
  }

  Rule parse_rule() {
    expect_keyword("rule");
    Rule rule;
    rule.name = expect_ident("a rule name");
    expect("(");
    if (!at_symbol(")")) {
      do {
        std::vector<std::string> names;
        do {
          const Token& at = peek();
          names.push_back(expect_ident("a variable name"));
          if (is_keyword(names.back())) fail(at, "'" + names.back() + "' is reserved");
        } while (accept(","));
        expect(":");
        VarType type = VarType::list;
        if (accept_keyword("int")) {
          type = VarType::integer;
        } else if (!accept_keyword("list")) {
          fail(peek(), "expected 'int' or 'list'");
        }
        for (auto& name : names) rule.params.push_back({std::move(name), type});
      } while (accept(";"));
    }
    expect(")");
    params_ = &rule.params;
    expect("{");
    expect_keyword("lhs");
    rule.lhs = parse_graph();
    expect_keyword("rhs");
    rule.rhs = parse_graph();
    if (accept_keyword("interface")) {
      expect("=");
      expect("[");
      if (!at_symbol("]")) {
        do {
          rule.interface.push_back(parse_interface_entry(rule));
        } while (accept(","));
      }
      expect("]");
    }
    if (accept_keyword("where")) rule.condition = parse_condition();
    expect("}");
    params_ = nullptr;
    return rule;
  }

  std::pair<std::size_t, std::size_t> parse_interface_entry(const Rule& rule) {
    const auto find = [&](const RuleGraph& graph, const Token& at, const std::string& name,
                          const char* side) {
      for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].name == name) return i;
      }
      fail(at, "interface node " + name + " is missing from the " + side);
    };
    const bool pair = accept("(");
    const Token& left_at = peek();
    const std::string left = expect_name("a node name");
    std::string right = left;
    const Token* right_at = &left_at;
    if (pair) {
      expect(",");
      right_at = &peek();
      right = expect_name("a node name");
      expect(")");
    }
    return {find(rule.lhs, left_at, left, "left-hand side"),
            find(rule.rhs, *right_at, right, "right-hand side")};
  }

  RuleGraph parse_graph() {
    RuleGraph graph;
    struct PendingEdge {
      Token source_at;
      std::string source;
      Token target_at;
      std::string target;
    };
    std::vector<PendingEdge> pending;
    std::map<std::string, std::size_t> names;
    expect("{");
    while (!at_symbol("}")) {
      const Token at = peek();
      const std::string name = expect_name("a node name");
      if (accept(":")) {
        RuleNode node;
        node.name = name;
        node.label = parse_label_expr();
        if (accept("#")) {
          const Token& word = peek();
          const std::string text = expect_ident("a node mark");
          if (text == "any") {
            node.mark = std::nullopt;
          } else {
            const auto mark = parse_node_mark(text);
            if (!mark || *mark == NodeMark::none) fail(word, "unknown node mark '" + text + "'");
            node.mark = *mark;
          }
        }
        if (accept("(")) {
          if (!accept_keyword("R")) fail(peek(), "expected 'R' in a root marker");
          expect(")");
          node.root = true;
        }
        if (!names.emplace(name, graph.nodes.size()).second) fail(at, "duplicate node " + name);
        graph.nodes.push_back(std::move(node));
      } else {
        RuleEdge edge;
        if (accept("--")) {
          edge.bidirectional = true;
        } else if (!accept("->")) {
          fail(peek(), "expected ':', '->' or '--' after " + name);
        }
        const Token target_at = peek();
        const std::string target = expect_name("a node name");
        expect(",");
        edge.label = parse_label_expr();
        if (accept("#")) {
          const Token& word = peek();
          const auto mark = parse_edge_mark(expect_ident("an edge mark"));
          if (!mark || *mark == EdgeMark::none) fail(word, "unknown edge mark '" + word.text + "'");
          edge.mark = *mark;
        }
        pending.push_back({at, name, target_at, target});
        graph.edges.push_back(std::move(edge));
      }
      if (!accept(";")) break;
    }
    expect("}");
    for (std::size_t e = 0; e < pending.size(); ++e) {
      const auto resolve = [&](const Token& at, const std::string& name) {
        const auto it = names.find(name);
        if (it == names.end()) fail(at, "edge endpoint " + name + " is not a node of this graph");
        return it->second;
      };
      graph.edges[e].source = resolve(pending[e].source_at, pending[e].source);
      graph.edges[e].target = resolve(pending[e].target_at, pending[e].target);
    }
    return graph;
  }

  std::optional<std::size_t> variable(const std::string& name) const {
    for (std::size_t i = 0; i < params_->size(); ++i) {
      if ((*params_)[i].name == name) return i;
    }
    return std::nullopt;
  }

  LabelExpr parse_label_expr() {
    if (accept_keyword("empty")) return {};
    LabelExpr expr;
    do {
      if (peek().kind == Token::Kind::string) {
        expr.emplace_back(Atom(next().text));
        continue;
      }
      const Token at = peek();
      if (at.kind == Token::Kind::ident) {
        if (const auto v = variable(at.text); v && (*params_)[*v].type == VarType::list) {
          next();
          expr.emplace_back(VarRef{*v, VarType::list});
          continue;
        }
      }
      IntExpr value = parse_sum();
      if (value.kind == IntExpr::Kind::variable) {
        expr.emplace_back(VarRef{value.variable, VarType::integer});
      } else if (const auto folded = fold(value)) {
        expr.emplace_back(Atom(*folded));
      } else {
        expr.emplace_back(std::move(value));
      }
    } while (accept(":"));
    return expr;
  }

  static std::optional<std::int64_t> fold(const IntExpr& expr) {
    if (expr.kind == IntExpr::Kind::variable) return std::nullopt;
    for (const auto& operand : expr.operands) {
      if (!fold(operand)) return std::nullopt;
    }
    try {
      return eval(expr, Bindings{});
    } catch (const EvalError&) {
      return std::nullopt;
    }
  }

  IntExpr parse_sum() {
    IntExpr lhs = parse_product();
    for (;;) {
      if (accept("+")) {
        lhs = IntExpr::binary(IntExpr::Kind::add, std::move(lhs), parse_product());
      } else if (accept("-")) {
        lhs = IntExpr::binary(IntExpr::Kind::subtract, std::move(lhs), parse_product());
      } else {
        return lhs;
      }
    }
  }

  IntExpr parse_product() {
    IntExpr lhs = parse_factor();
    while (accept("*")) lhs = IntExpr::binary(IntExpr::Kind::multiply, std::move(lhs), parse_factor());
    return lhs;
  }

  IntExpr parse_factor() {
    const Token& at = peek();
    if (accept("-")) {
      IntExpr operand = parse_factor();
      if (operand.kind == IntExpr::Kind::literal) {
        operand.value = -operand.value;
        return operand;
      }
      return IntExpr::negated(std::move(operand));
    }
    if (accept("(")) {
      IntExpr inner = parse_sum();
      expect(")");
      return inner;
    }
    if (at.kind == Token::Kind::integer) return IntExpr::literal(next().value);
    if (at.kind == Token::Kind::ident) {
      const auto v = params_ ? variable(at.text) : std::nullopt;
      if (!v) fail(at, "unknown variable " + at.text);
      if ((*params_)[*v].type != VarType::integer) {
        fail(at, "list variable " + at.text + " used where an integer is needed");
      }
      next();
      return IntExpr::var(*v);
    }
    fail(at, "expected an integer expression but found " + describe(at));
  }

  Condition parse_condition() {
    std::vector<Condition> terms{parse_conjunction()};
    while (accept_keyword("or")) terms.push_back(parse_conjunction());
    if (terms.size() == 1) return std::move(terms.front());
    return Condition::any(std::move(terms));
  }

  Condition parse_conjunction() {
    std::vector<Condition> terms{parse_unary()};
    while (accept_keyword("and")) terms.push_back(parse_unary());
    if (terms.size() == 1) return std::move(terms.front());
    return Condition::all(std::move(terms));
  }

  Condition parse_unary() {
    if (accept_keyword("not")) return Condition::negate(parse_unary());
    if (at_symbol("(")) {
      const std::size_t saved = pos_;
      try {
        return parse_comparison();
      } catch (const ParseError&) {
        pos_ = saved;
      }
      expect("(");
      Condition inner = parse_condition();
      expect(")");
      return inner;
    }
    return parse_comparison();
  }

  Condition parse_comparison() {
    IntExpr lhs = parse_sum();
    static const std::pair<std::string_view, CompareOp> kOps[] = {
        {"<", CompareOp::less},           {"<=", CompareOp::less_equal},
        {"=", CompareOp::equal},          {"==", CompareOp::equal},
        {"!=", CompareOp::not_equal},     {">=", CompareOp::greater_equal},
        {">", CompareOp::greater}};
    for (const auto& [symbol, op] : kOps) {
      if (accept(symbol)) return Condition::compare(op, std::move(lhs), parse_sum());
    }
    fail(peek(), "expected a comparison operator but found " + describe(peek()));
  }

  Command parse_command() {
    std::vector<Command> steps{parse_block()};
    while (accept(";")) steps.push_back(parse_block());
    if (steps.size() == 1) return std::move(steps.front());
    return Command::sequence(std::move(steps));
  }

  Command parse_block() {
    const bool is_if = at_keyword("if");
    if (is_if || at_keyword("try")) {
      next();
      Command condition = parse_block();
      Command then_branch = Command::skip();
      Command else_branch = Command::skip();
      if (accept_keyword("then")) then_branch = parse_block();
      if (accept_keyword("else")) else_branch = parse_block();
      return is_if ? Command::if_then_else(std::move(condition), std::move(then_branch), std::move(else_branch))
                   : Command::try_then_else(std::move(condition), std::move(then_branch),
                                            std::move(else_branch));
    }
    Command command = parse_primary();
    while (accept("!")) command = Command::loop(std::move(command));
    return command;
  }

  Command parse_primary() {
    if (accept("(")) {
      Command inner = parse_command();
      expect(")");
      return inner;
    }
    if (accept("{")) {
      std::vector<std::string> names;
      if (!at_symbol("}")) {
        do {
          names.push_back(expect_ident("a rule name"));
        } while (accept(","));
      }
      expect("}");
      return Command::rule_set(std::move(names));
    }
    if (accept_keyword("break")) return Command::break_loop();
    if (accept_keyword("skip")) return Command::skip();
    const Token& at = peek();
    const std::string name = expect_ident("a command");
    if (is_keyword(name)) fail(at, "unexpected '" + name + "'");
    return Command::call(name);
  }

  const std::vector<Variable>* params_ = nullptr;
};

std::string print_atom(const Atom& atom) { return to_string(Label{atom}); }

int precedence(const IntExpr& expr) {
  switch (expr.kind) {
    case IntExpr::Kind::add:
    case IntExpr::Kind::subtract: return 1;
    case IntExpr::Kind::multiply: return 2;
    case IntExpr::Kind::negate: return 3;
    default: return 4;
  }
}

std::string print_int(const IntExpr& expr, const std::vector<Variable>& vars, int context = 0) {
  std::string out;
  const int own = precedence(expr);
  switch (expr.kind) {
    case IntExpr::Kind::literal:
      out = std::to_string(expr.value);
      if (expr.value < 0 && context > 0) out = "(" + out + ")";
      return out;
    case IntExpr::Kind::variable:
      return vars.at(expr.variable).name;
    case IntExpr::Kind::negate:
      out = "-" + print_int(expr.operands[0], vars, 3);
      break;
    default: {
      const char* op = expr.kind == IntExpr::Kind::add        ? " + "
                       : expr.kind == IntExpr::Kind::subtract ? " - "
                                                              : " * ";
      out = print_int(expr.operands[0], vars, own) + op + print_int(expr.operands[1], vars, own + 1);
      break;
    }
  }
  return own < context ? "(" + out + ")" : out;
}

std::string print_label_expr(const LabelExpr& expr, const std::vector<Variable>& vars) {
  if (expr.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < expr.size(); ++i) {
    if (i > 0) out += ':';
    if (const auto* atom = std::get_if<Atom>(&expr[i])) {
      out += print_atom(*atom);
    } else if (const auto* ref = std::get_if<VarRef>(&expr[i])) {
      out += vars.at(ref->index).name;
    } else {
      out += print_int(std::get<IntExpr>(expr[i]), vars, 0);
    }
  }
  return out;
}

std::string_view op_text(CompareOp op) {
  switch (op) {
    case CompareOp::less: return "<";
    case CompareOp::less_equal: return "<=";
    case CompareOp::equal: return "=";
    case CompareOp::not_equal: return "!=";
    case CompareOp::greater_equal: return ">=";
    case CompareOp::greater: return ">";
  }
  return "?";
}

std::string print_condition(const Condition& c, const std::vector<Variable>& vars, int context = 0) {
  switch (c.kind) {
    case Condition::Kind::compare:
      return print_int(c.lhs, vars) + " " + std::string(op_text(c.op)) + " " + print_int(c.rhs, vars);
    case Condition::Kind::negate:
      return "not " + print_condition(c.operands[0], vars, 3);
    case Condition::Kind::all:
    case Condition::Kind::any: {
      const int own = c.kind == Condition::Kind::any ? 1 : 2;
      std::string out;
      for (std::size_t i = 0; i < c.operands.size(); ++i) {
        if (i > 0) out += own == 1 ? " or " : " and ";
        out += print_condition(c.operands[i], vars, own + 1);
      }
      return own < context ? "(" + out + ")" : out;
    }
  }
  return "";
}

std::string print_graph(const RuleGraph& graph, const std::vector<Variable>& vars) {
  std::string out = "{";
  bool first = true;
  const auto separator = [&]() {
    out += first ? " " : "; ";
    first = false;
  };
  for (const auto& node : graph.nodes) {
    separator();
    out += node.name + ": " + print_label_expr(node.label, vars);
    if (!node.mark) {
      out += " # any";
    } else if (*node.mark != NodeMark::none) {
      out += " # " + std::string(to_string(*node.mark));
    }
    if (node.root) out += " (R)";
  }
  for (const auto& edge : graph.edges) {
    separator();
    out += graph.nodes.at(edge.source).name + (edge.bidirectional ? " -- " : " -> ") +
           graph.nodes.at(edge.target).name + ", " + print_label_expr(edge.label, vars);
    if (edge.mark != EdgeMark::none) out += " # " + std::string(to_string(edge.mark));
  }
  out += first ? "}" : " }";
  return out;
}

bool is_conditional(const Command& c) {
  return c.kind == Command::Kind::if_then_else || c.kind == Command::Kind::try_then_else;
}

std::string print_block(const Command& c);

std::string print_any(const Command& c) {
  switch (c.kind) {
    case Command::Kind::rule_set: {
      std::string out = "{";
      for (std::size_t i = 0; i < c.names.size(); ++i) out += (i > 0 ? ", " : "") + c.names[i];
      return out + "}";
    }
    case Command::Kind::call: return c.names.at(0);
    case Command::Kind::sequence: {
      std::string out;
      for (std::size_t i = 0; i < c.children.size(); ++i) {
        if (i > 0) out += "; ";
        const auto& child = c.children[i];
        out += child.kind == Command::Kind::sequence ? "(" + print_any(child) + ")" : print_any(child);
      }
      return out;
    }
    case Command::Kind::if_then_else:
    case Command::Kind::try_then_else: {
      std::string out = c.kind == Command::Kind::if_then_else ? "if " : "try ";
      out += print_block(c.children[0]);
      if (c.children[1].kind != Command::Kind::skip) out += " then " + print_block(c.children[1]);
      if (c.children[2].kind != Command::Kind::skip) out += " else " + print_block(c.children[2]);
      return out;
    }
    case Command::Kind::loop: {
      const auto& body = c.children.at(0);
      const bool wrap = body.kind == Command::Kind::sequence || is_conditional(body);
      return (wrap ? "(" + print_any(body) + ")" : print_any(body)) + "!";
    }
    case Command::Kind::break_loop: return "break";
    case Command::Kind::skip: return "skip";
  }
  return "";
}

// Operand of if/try: sequences and nested conditionals need parentheses.
std::string print_block(const Command& c) {
  if (c.kind == Command::Kind::sequence || is_conditional(c)) return "(" + print_any(c) + ")";
  return print_any(c);
}

}  // namespace

HostGraph parse_host(std::string_view text) { return HostParser(text).parse(); }

std::string print_host(const HostGraph& graph) {
  std::string out = "[ ";
  std::unordered_map<std::uint32_t, std::size_t> position;
  for (NodeId v : graph.node_ids()) {
    const std::size_t i = position.size();
    position[index_of(v)] = i;
    out += "(n" + std::to_string(i) + (graph.is_root(v) ? "(R)" : "") + ", " + to_string(graph.label(v));
    if (graph.mark(v) != NodeMark::none) out += " # " + std::string(to_string(graph.mark(v)));
    out += ") ";
  }
  out += "| ";
  std::size_t j = 0;
  for (EdgeId e : graph.edge_ids()) {
    out += "(e" + std::to_string(j++) + ", n" + std::to_string(position[index_of(graph.source(e))]) +
           ", n" + std::to_string(position[index_of(graph.target(e))]) + ", " + to_string(graph.label(e));
    if (graph.mark(e) != EdgeMark::none) out += " # " + std::string(to_string(graph.mark(e)));
    out += ") ";
  }
  return out + "]";
}

Program parse_program(std::string_view text) { return ProgramParser(text).parse(); }

std::string print_command(const Command& command) { return print_any(command); }

std::string print_rule(const Rule& rule) {
  std::string out = "rule " + rule.name + "(";
  for (std::size_t i = 0; i < rule.params.size(); ++i) {
    const bool last_of_group = i + 1 == rule.params.size() || rule.params[i + 1].type != rule.params[i].type;
    out += rule.params[i].name;
    if (last_of_group) {
      out += rule.params[i].type == VarType::integer ? ": int" : ": list";
      if (i + 1 < rule.params.size()) out += "; ";
    } else {
      out += ", ";
    }
  }
  out += ") {\n";
  out += "  lhs " + print_graph(rule.lhs, rule.params) + "\n";
  out += "  rhs " + print_graph(rule.rhs, rule.params) + "\n";
  out += "  interface = [";
  for (std::size_t i = 0; i < rule.interface.size(); ++i) {
    if (i > 0) out += ", ";
    const auto& left = rule.lhs.nodes.at(rule.interface[i].first).name;
    const auto& right = rule.rhs.nodes.at(rule.interface[i].second).name;
    out += left == right ? left : "(" + left + ", " + right + ")";
  }
  out += "]\n";
  if (rule.condition) out += "  where " + print_condition(*rule.condition, rule.params) + "\n";
  return out + "}\n";
}

std::string print_program(const Program& program) {
  std::string out;
  for (const auto& procedure : program.procedures) {
    out += procedure.name + " = " + print_command(procedure.body) + "\n";
  }
  for (const auto& rule : program.rules) out += "\n" + print_rule(rule);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace rgt
