#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "rgt/graph.hpp"
#include "rgt/interpreter.hpp"

namespace rgt {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Host graphs: [ (n0(R), 1:2 # red) ... | (e0, n0, n1, empty # dashed) ... ]
// Nodes and edges get ids in order of appearance.
HostGraph parse_host(std::string_view text);
// Canonical form with positional names n<i> and e<i>, in id order.
std::string print_host(const HostGraph& graph);

Program parse_program(std::string_view text);
std::string print_program(const Program& program);
std::string print_command(const Command& command);
std::string print_rule(const Rule& rule);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace rgt
