#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "aco/bipartite_graph.hpp"

namespace aco {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_number(line) {}
  std::size_t line_number;
};

// Text format, LF newlines, '#' starts a comment line:
//   bipartite <|S|> <|C|> <|E|>
//   <|S| lines; line i = ascending consensus ids of subproblem i>
void write_graph(std::ostream& out, const BipartiteGraph& g,
                 const std::map<std::string, std::string>& metadata = {});
void write_graph(const std::string& path, const BipartiteGraph& g,
                 const std::map<std::string, std::string>& metadata = {});

// Throws ParseError on malformed input and ValidationError when the file is
// well-formed but violates graph invariants (degree floors, duplicates).
BipartiteGraph read_graph(std::istream& in,
                          std::map<std::string, std::string>* metadata = nullptr);
BipartiteGraph read_graph(const std::string& path,
                          std::map<std::string, std::string>* metadata = nullptr);

}  // namespace aco
