#include <fstream>
#include <ostream>
#include <sstream>

#include "aco/graph_io.hpp"
#include "aco/subproblem.hpp"

namespace aco {

namespace {

void write_doubles(std::ostream& out, const std::vector<double>& v) {
  char buf[32];
  for (double d : v) {
    snprintf(buf, sizeof buf, " %.17g", d);
    out << buf;
  }
}

}  // namespace

void write_problem(std::ostream& out, const Problem& problem,
                   const std::map<std::string, std::string>& metadata) {
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  out << "problem " << problem.size() << '\n';
  for (const auto& s : problem) {
    switch (s.kind) {
      case SubproblemSpec::Kind::quadratic:
        out << "quad";
        break;
      case SubproblemSpec::Kind::hinge:
        out << "hinge";
        break;
      case SubproblemSpec::Kind::simplex:
        out << "simplex";
        break;
    }
    out << ' ' << s.dim();
    for (NodeId l : s.slots) out << ' ' << l;
    if (s.kind == SubproblemSpec::Kind::quadratic) {
      write_doubles(out, s.Q);
      write_doubles(out, s.c);
    } else if (s.kind == SubproblemSpec::Kind::hinge) {
      write_doubles(out, {s.weight, s.offset});
      out << ' ' << s.power;
      write_doubles(out, s.a);
    }
    out << '\n';
  }
}

void write_problem(const std::string& path, const Problem& problem,
                   const std::map<std::string, std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_problem(out, problem, metadata);
}

Problem read_problem(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      bool blank = true;
      for (char ch : line) {
        if (ch == '#') break;
        if (!isspace(static_cast<unsigned char>(ch))) {
          blank = false;
          break;
        }
      }
      if (!blank) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(line_no, "empty problem file");
  std::istringstream header(line);
  std::string tag;
  std::size_t count = 0;
  if (!(header >> tag >> count) || tag != "problem") {
    throw ParseError(line_no, "expected header 'problem <count>'");
  }

  Problem problem;
  problem.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!next_line()) {
      throw ParseError(line_no, "expected subproblem line " + std::to_string(i) +
                                    ", got end of file");
    }
    std::istringstream ss(line);
    SubproblemSpec s;
    std::string kind;
    std::size_t n = 0;
    if (!(ss >> kind >> n) || n == 0) {
      throw ParseError(line_no, "malformed subproblem line");
    }
    s.slots.resize(n);
    for (auto& l : s.slots) {
      if (!(ss >> l)) throw ParseError(line_no, "missing slot id");
    }
    auto read_doubles = [&](std::vector<double>& v, std::size_t m) {
      v.resize(m);
      for (auto& d : v) {
        if (!(ss >> d)) throw ParseError(line_no, "missing numeric parameter");
      }
    };
    if (kind == "quad") {
      s.kind = SubproblemSpec::Kind::quadratic;
      read_doubles(s.Q, n * n);
      read_doubles(s.c, n);
    } else if (kind == "hinge") {
      s.kind = SubproblemSpec::Kind::hinge;
      if (!(ss >> s.weight >> s.offset >> s.power)) {
        throw ParseError(line_no, "missing hinge parameters");
      }
      read_doubles(s.a, n);
    } else if (kind == "simplex") {
      s.kind = SubproblemSpec::Kind::simplex;
    } else {
      throw ParseError(line_no, "unknown subproblem kind '" + kind + "'");
    }
    s.validate();
    problem.push_back(std::move(s));
  }
  return problem;
}

Problem read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_problem(in);
}

}  // namespace aco
