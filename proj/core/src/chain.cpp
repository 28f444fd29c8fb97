#include "gridham/chain.hpp"

namespace gridham {

Rat dart_coefficient(const GridGraph& g, const Chain1& c, DartId d) {
  const EdgeId e = dart_edge(d);
  return d == g.bw_dart(e) ? c.get(e) : -c.get(e);
}

Chain0 boundary1(const GridGraph& g, const Chain1& c) {
  Chain0 out;
  for (const auto& [e, v] : c.terms()) {
    out.add(g.edge(e).white, v);
    out.add(g.edge(e).black, -v);
  }
  return out;
}

Chain1 boundary2(const GridGraph& g, const Chain2& c) {
  Chain1 out;
  for (const auto& [f, v] : c.terms()) {
    for (DartId d : g.face(f).darts) {
      const EdgeId e = dart_edge(d);
      out.add(e, d == g.bw_dart(e) ? v : -v);
    }
  }
  return out;
}

int homology_dimension(const GridGraph& g) {
  return 2 - static_cast<int>(g.faces().size()) + g.edge_count() - g.vertex_count();
}

}  // namespace gridham
