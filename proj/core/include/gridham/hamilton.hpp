#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gridham/cover.hpp"
#include "gridham/grid.hpp"
#include "gridham/height.hpp"

namespace gridham {

struct NoCover : std::runtime_error {
  NoCover() : std::runtime_error("the graph admits no cycle cover") {}
};

// A straight run of squares f_0 .. f_{r-1} left behind by lowering the far
// end of an even maximal row (mirrored for minimal): f_0 .. f_{r-2} form an
// odd row of `kind`, f_{r-1} is a single opposite extremum. Joining across
// either end's boundary is still possible; using both would merge the same
// cycles twice.
struct Bridge {
  std::vector<FaceId> squares;      // f_0 .. f_{r-1}, r >= 2, colinear
  RowKind kind = RowKind::Maximal;  // kind of the odd part f_0 .. f_{r-2}
  int parent_node = -1;             // boundary node holding f_0
  int child_node = -1;              // boundary node created around f_{r-1}
};

// Boundaries touched during one reduction, organized as a forest: roots are
// boundaries between the original cycles, every other node was created by
// the bridge on its parent edge, and growth happens at leaves only.
struct BoundaryNode {
  bool original = false;
  int parent = -1;      // forest edge toward the root; -1 for originals
  int via_bridge = -1;  // bridge that created this node; -1 for originals
  std::vector<FaceId> squares;  // membership when the node was recorded
};

// Last two squares of a bridge: an adjacent higher local maximum and lower
// local minimum separated by a cover edge (mirrored for minimal kind). The
// pairs of a stuck state are pairwise disjoint.
struct FixedPair {
  FaceId first = -1;   // f_{r-2}
  FaceId second = -1;  // f_{r-1}
};

// Proof that a cover's Z-move component cannot go below m cycles: a stuck
// state with m + r cycles and r bridges in which every critical boundary
// square is stuck or lies on a bridge and no square meets three cycles.
// Sliding each fixed pair along its row shows any cover in the component
// keeps at least one boundary per pair, hence p >= m.
struct MinCycleCertificate {
  int m = 1;
  std::vector<FixedPair> pairs;        // one per bridge of the stuck state
  std::vector<FaceId> stuck;           // stuck critical squares, square order
  std::vector<int> stuck_boundary;     // parallel to stuck: boundary group id
  std::vector<char> stuck_edges;       // edge set of the stuck state
};

struct ReduceOutcome {
  bool reduced = false;
  MinCycleCertificate certificate;  // meaningful when !reduced
};

// One reduction attempt on a state with p >= 2: either lowers p by exactly
// one (hill climb on boundary extrema, else critical-row search with bridge
// creation and reverse-order unwinding) or proves p minimal in the Z-move
// component and restores the input state. The hole signature never changes.
ReduceOutcome reduce_once(HeightState& s);

struct ReduceResult {
  std::optional<CycleCover> reduced;
  std::optional<MinCycleCertificate> certificate;
};
ReduceResult reduce_once(const CycleCover& h);

struct MinimizeResult {
  CycleCover cover;                 // a minimum-p cover of the component
  MinCycleCertificate certificate;  // certifies cover.p() == m
};

// Iterate reduce_once to a fixpoint inside the component of h.
MinimizeResult minimize_in_component(const CycleCover& h);

struct ComponentOutcome {
  std::vector<long long> signature;  // hole bases shared by the component
  MinimizeResult result;
};

struct SearchOutcome {
  int minimum = 0;     // least p over every component
  std::size_t best = 0;  // index of a component attaining it
  std::vector<ComponentOutcome> components;
  long long signatures_tried = 0;  // size of the enumerated signature box
};

// Minimum cycles over the whole cover space: enumerate feasible hole
// signatures (difference-system box with per-hole pins), reconstruct one
// representative per component, minimize each. Throws NoCover.
SearchOutcome search_all_components(const GridGraph& g);

struct HamiltonVerdict {
  bool hamiltonian = false;
  std::vector<VertexId> cycle;  // the vertex cycle when hamiltonian
  std::optional<SearchOutcome> search;  // absent when no cover exists
};

// Decides Hamiltonicity: graphs that are not 2-connected or have no cover
// are rejected outright; otherwise the component search settles it and the
// certificates document a negative answer.
HamiltonVerdict is_hamiltonian(const GridGraph& g);

// Hole-adjacency structure used by incremental boundary discovery: nodes are
// the holes plus the outer face, linked when a corridor of non-boundary,
// non-extremal squares that crosses no cover edge joins their rims. Such
// corridors are unique per pair and the links form a forest.
struct HoleLink {
  FaceId a = -1;
  FaceId b = -1;
  std::vector<FaceId> path;  // corridor squares, rim to rim
};

struct HoleForest {
  std::vector<FaceId> nodes;            // outer face first, then holes
  std::vector<HoleLink> links;
  std::vector<std::vector<char>> overlap;  // links sharing a square
  std::vector<int> tree_of;             // per node: tree index in the forest
};

HoleForest hole_forest(const HeightState& s);

}  // namespace gridham
