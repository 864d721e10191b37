#include "aco/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace aco {

namespace {

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

void parse_metadata(const std::string& line,
                    std::map<std::string, std::string>* metadata) {
  if (!metadata) return;
  // comment lines of the form "# key=value" carry provenance
  std::size_t p = line.find('#');
  if (p == std::string::npos) return;
  std::istringstream ss(line.substr(p + 1));
  std::string token;
  while (ss >> token) {
    std::size_t eq = token.find('=');
    if (eq != std::string::npos && eq > 0) {
      (*metadata)[token.substr(0, eq)] = token.substr(eq + 1);
    }
  }
}

}  // namespace

void write_graph(std::ostream& out, const BipartiteGraph& g,
                 const std::map<std::string, std::string>& metadata) {
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  out << "bipartite " << g.num_subproblems() << ' ' << g.num_consensus() << ' '
      << g.num_edges() << '\n';
  for (NodeId i = 0; i < g.num_subproblems(); ++i) {
    for (EdgeId e = g.sub_begin(i); e < g.sub_end(i); ++e) {
      if (e != g.sub_begin(i)) out << ' ';
      out << g.edge_target(e);
    }
    out << '\n';
  }
}

void write_graph(const std::string& path, const BipartiteGraph& g,
                 const std::map<std::string, std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_graph(out, g, metadata);
}

BipartiteGraph read_graph(std::istream& in,
                          std::map<std::string, std::string>* metadata) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (is_comment_or_blank(line)) {
        parse_metadata(line, metadata);
        continue;
      }
      return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(line_no, "empty file");
  std::istringstream header(line);
  std::string tag;
  std::size_t num_sub = 0, num_con = 0, num_edges = 0;
  if (!(header >> tag >> num_sub >> num_con >> num_edges) ||
      tag != "bipartite") {
    throw ParseError(line_no, "expected header 'bipartite <|S|> <|C|> <|E|>'");
  }

  std::vector<std::vector<NodeId>> adj(num_sub);
  std::size_t edges_seen = 0;
  for (std::size_t i = 0; i < num_sub; ++i) {
    if (!next_line()) {
      throw ParseError(line_no, "expected adjacency line for subproblem " +
                                    std::to_string(i) + ", got end of file");
    }
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p >= end) break;
      NodeId v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        throw ParseError(line_no, "malformed consensus id");
      }
      adj[i].push_back(v);
      p = next;
    }
    edges_seen += adj[i].size();
  }
  if (edges_seen != num_edges) {
    throw ParseError(line_no, "header declares " + std::to_string(num_edges) +
                                  " edges but body has " +
                                  std::to_string(edges_seen));
  }
  return BipartiteGraph::from_adjacency(std::move(adj), num_con);
}

BipartiteGraph read_graph(const std::string& path,
                          std::map<std::string, std::string>* metadata) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_graph(in, metadata);
}

}  // namespace aco
