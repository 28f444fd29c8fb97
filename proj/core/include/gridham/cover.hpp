#pragma once

#include <optional>
#include <vector>

#include "gridham/chain.hpp"
#include "gridham/diffsys.hpp"
#include "gridham/grid.hpp"

namespace gridham {

// A 2-factor: spanning subgraph with every vertex of degree exactly 2,
// partitioning the vertices into p disjoint cycles.
class CycleCover {
 public:
  CycleCover(const GridGraph& g, std::vector<char> in_cover);

  const GridGraph& graph() const { return *g_; }
  bool contains(EdgeId e) const { return in_cover_[e] != 0; }
  const std::vector<char>& edges() const { return in_cover_; }

  int p() const { return p_; }
  // Cycles are numbered by their smallest vertex id in increasing order;
  // each cycle lists its vertices in traversal order from that vertex,
  // starting toward the lowest-numbered neighbor.
  int cycle_of(VertexId v) const { return cycle_of_[v]; }
  const std::vector<std::vector<VertexId>>& cycles() const { return cycles_; }

 private:
  const GridGraph* g_;
  std::vector<char> in_cover_;
  std::vector<int> cycle_of_;
  std::vector<std::vector<VertexId>> cycles_;
  int p_ = 0;
};

// Spanning subgraph with deg(v) = phi(v) for every v, found by reduction to
// bipartite matching (each vertex split into phi(v) demand slots). Empty
// result means no such subgraph exists.
std::optional<std::vector<char>> find_phi_factor(const GridGraph& g,
                                                 const std::vector<int>& phi);

// Any valid 2-factor, or nothing when S_phi is empty.
std::optional<CycleCover> find_initial_cover(const GridGraph& g);

// Edges of H as a 1-chain, black-to-white orientation, unit coefficients.
Chain1 omega(const CycleCover& h);

// Squares classified by how the cycles meet them.
enum class BoundaryClass { Critical, Corner, Triple, PlainBoundary };

struct BoundarySquare {
  FaceId face = -1;
  BoundaryClass cls = BoundaryClass::PlainBoundary;
  // Critical squares only: the same-cycle edge in H and the one not in H.
  EdgeId edge_in = -1;
  EdgeId edge_out = -1;
};

struct BoundarySet {
  std::vector<FaceId> faces;             // all faces incident to >= 2 cycles
  std::vector<BoundarySquare> squares;   // the square members, classified
};

BoundarySet boundary_faces(const CycleCover& h);

// Difference system whose integer solutions correspond exactly to the
// spanning subgraphs with the same vertex degrees as h0 (for a 2-factor h0,
// all cycle covers): one node per face (squares, holes, outer), reference =
// outer. For each edge with faces l/r on the left/right of its
// black-to-white dart, the arcs force 0 <= a(r) - a(l) + [e in h0] <= 1. A
// solution a gives the subgraph with e in H iff that expression is 1, and
// tau_H = tau_H0 + 2a.
DifferenceSystem cover_system(const GridGraph& g, const std::vector<char>& h0);

// Rebuild the cover encoded by a solution of cover_system.
std::vector<char> cover_from_offsets(const GridGraph& g, const std::vector<char>& h0,
                                     const std::vector<long long>& a);

}  // namespace gridham
