#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridham/cover.hpp"
#include "gridham/grid.hpp"

namespace gridham {

struct NotExtremal : std::logic_error {
  NotExtremal() : std::logic_error("Z-transformation requires a local extremum") {}
};
struct RowInvalidated : std::logic_error {
  RowInvalidated() : std::logic_error("row move precondition failed") {}
};

enum class RowKind { Maximal, Minimal };

// A straight run of squares f_0 .. f_{length-1}, ascending (Maximal) or
// descending (Minimal) by one per step, each square higher (lower) than every
// neighbor off the run.
struct RowRef {
  FaceId start = -1;
  Dir dir = Dir::E;  // step direction; meaningless when length == 1
  int length = 0;
  RowKind kind = RowKind::Maximal;
  std::vector<FaceId> squares;
};

struct RowResult {
  bool stuck = false;
  RowRef row;          // movable row when !stuck; the walked prefix when stuck
  FaceId stop_face = -1;  // face after the last row square; -1 if outside the graph
};

// Mutable cover-plus-height engine. Keeps, for one 2-factor H:
//   - the edge set and a doubled height potential: one integer per square,
//     one base value per hole (outer fixed at the graph's boundary values),
//   - a cycle decomposition as stable labels with sizes; p = cycle count.
// Across any single edge the two sides differ by exactly one, the higher
// side lying right of the black-to-white dart exactly when the edge is in
// the cover. That edge-local rule is the definition of higher/lower used by
// extrema and rows; it never consults a neighbor's stored value. The stored
// tau are branch values integrated over a fixed spanning tree of the faces:
// when every hole_defect vanishes (in particular on hole-free graphs) they
// are single-valued and the edge rule holds globally, otherwise the height
// is genuinely multivalued around the defective holes and only the local
// rule is meaningful. Hole bases are path integrals along the graph's fixed
// hole_paths, so they are comparable across states: square Z-moves never
// change them, and two covers agree on all of them exactly when the covers
// are connected by square Z-moves.
class HeightState {
 public:
  explicit HeightState(const CycleCover& h);

  const GridGraph& graph() const { return *g_; }
  bool contains(EdgeId e) const { return in_cover_[e] != 0; }
  const std::vector<char>& cover_edges() const { return in_cover_; }
  int p() const { return p_; }
  int cycle_label(VertexId v) const { return label_[v]; }
  long long cycle_size(int label) const { return label_size_[label]; }

  long long tau(FaceId f) const;  // squares and holes (base); outer -> 0
  // Value the face right of dart d shows at d's edge (branch value; per-edge
  // profile for outer and holes).
  long long side_value_at(DartId d) const;
  // Value shown at edge e by the face on the given side of its
  // black-to-white dart.
  long long side_value_right(EdgeId e) const;
  long long side_value_left(EdgeId e) const;
  // Apparent value of the face adjacent to `square` across its edge in
  // direction d: tau(square) plus the edge-local step, one higher or one
  // lower by the cover rule. Well defined on every graph.
  long long across(FaceId square, Dir d) const;
  // The square one step from `square` in direction d, or -1 if that face is
  // not a square.
  FaceId square_step(FaceId square, Dir d) const;
  EdgeId edge_of(FaceId square, Dir d) const;

  bool local_max(FaceId square) const;
  bool local_min(FaceId square) const;
  // All extremal squares (maxima, minima), in square_index order.
  std::pair<std::vector<FaceId>, std::vector<FaceId>> local_extrema() const;

  // Number of distinct cycles among the four corner vertices (1, 2 or 3+).
  int corner_label_count(FaceId square) const;

  // Z-transformation at a local extremum: toggles the 4 edges, moves tau(f)
  // by -2 (maximum) or +2 (minimum), joins or splits cycles. Throws
  // NotExtremal.
  void z_transform(FaceId square);

  // Straight walk from a square that is higher (Maximal) or lower (Minimal)
  // than at least three of its four side values. Throws RowInvalidated if the
  // start does not qualify.
  RowResult row_from(FaceId start, RowKind kind) const;
  // Lower a maximal (raise a minimal) row: Z-moves from the far end back to
  // the start. Verifies the row is still intact (RowInvalidated otherwise).
  void move_row(const RowRef& row);

  // Hole base values in holes() order: the height integrated along each
  // fixed hole path. Constant under square Z-moves; the complete invariant
  // of the Z-move component.
  std::vector<long long> signature() const;

  CycleCover cover() const;

  // Recompute everything from the edge set and compare (test support).
  void check_consistency() const;

 private:
  void integrate();
  int fresh_label();

  const GridGraph* g_;
  std::vector<char> in_cover_;
  std::vector<long long> tau_;       // per face: square tau / hole base / outer 0
  std::vector<int> rim_offset_;      // per dart d: offset of face_right_of(d) at
                                     // dart_edge(d) when that face is a hole;
                                     // zero at the hole-path entry dart, seam
                                     // just before it
  std::vector<std::array<EdgeId, 4>> side_edge_;  // per square face, by Dir
  std::vector<int> label_;           // per vertex
  std::vector<long long> label_size_;
  int p_ = 0;
};

// Free-function forms.
HeightState height_of(const CycleCover& h);
std::pair<std::vector<FaceId>, std::vector<FaceId>> local_extrema(const HeightState& s);
std::vector<long long> signature_of(const CycleCover& h);

}  // namespace gridham
