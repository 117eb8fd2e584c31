#include "gtensor/graph.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gtensor {

void write_graph(std::ostream& out, const FractionalGraph& g) {
  out << "d " << g.num_vertices() << "\n";
  for (const auto& e : g.edges())
    out << "e " << g.vertex_position(e.u) + 1 << " " << g.vertex_position(e.v) + 1 << " "
        << to_fraction_string(e.weight) << "\n";
}

FractionalGraph read_graph(std::istream& in) {
  std::string line;
  std::optional<FractionalGraph> g;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#' || tag == "c") continue;
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("graph line " + std::to_string(lineno) + ": " + what);
    };
    if (tag == "d") {
      long n = -1;
      if (g) fail("duplicate header");
      if (!(ls >> n) || n < 0) fail("bad vertex count");
      g = empty_graph(static_cast<std::size_t>(n));
    } else if (tag == "e") {
      if (!g) fail("edge before header");
      long u = 0, v = 0;
      std::string w = "1";
      if (!(ls >> u >> v)) fail("bad edge");
      ls >> w;
      try {
        g->add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), parse_rational(w));
      } catch (const std::exception& ex) {
        fail(ex.what());
      }
    } else {
      fail("unknown tag '" + tag + "'");
    }
  }
  if (!g) throw std::invalid_argument("graph: missing 'd' header");
  return *g;
}

FractionalGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_graph(in);
}

}  // namespace gtensor
