#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridham/geom.hpp"

namespace gridham {

using VertexId = int;
using EdgeId = int;
using FaceId = int;
// Darts are directed edges: dart 2e carries edge e from u to v (east- or
// northward), dart 2e+1 runs v to u.
using DartId = int;

inline EdgeId dart_edge(DartId d) { return d >> 1; }

struct Edge {
  VertexId u = -1;  // west endpoint (horizontal) or south endpoint (vertical)
  VertexId v = -1;
  bool horizontal = false;
  VertexId black = -1;  // endpoint with x+y even
  VertexId white = -1;
};

enum class FaceKind { Square, Hole, Outer };

struct Face {
  FaceKind kind = FaceKind::Outer;
  Cell cell{};                // meaningful for squares only
  std::vector<DartId> darts;  // clockwise boundary orbit; the face lies to the
                              // right of each of its darts
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};
struct NotConnectedError : std::logic_error {
  NotConnectedError() : std::logic_error("graph is not connected; no face structure") {}
};

enum class VertexColor { Black, White };

// Induced subgraph of the integer lattice together with its planar face
// structure. Immutable after construction.
class GridGraph {
 public:
  // Mask text: '#' marks a vertex, '.' or ' ' empty, lines starting with ';'
  // are comments. The first data line is the top row (largest y). An optional
  // comment "; origin <x> <y>" translates the whole mask.
  static GridGraph parse(const std::string& mask);
  static GridGraph from_points(std::vector<Point> pts);

  std::string serialize() const;

  int vertex_count() const { return static_cast<int>(verts_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Point>& vertices() const { return verts_; }
  Point vertex(VertexId v) const { return verts_[v]; }
  std::optional<VertexId> vertex_at(Point p) const;
  // Vertices are stored in row-major reading order: y descending, x ascending.
  VertexId neighbor(VertexId v, Dir d) const { return nbr_[v][static_cast<int>(d)]; }
  EdgeId edge_at(VertexId v, Dir d) const { return edge_at_[v][static_cast<int>(d)]; }
  int degree(VertexId v) const { return degree_[v]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::optional<EdgeId> edge_between(Point a, Point b) const;

  bool connected() const { return connected_; }
  // True iff the graph has no cut vertex and at least three vertices.
  bool two_connected() const { return two_connected_; }

  VertexColor color(VertexId v) const {
    return is_black(verts_[v]) ? VertexColor::Black : VertexColor::White;
  }

  // Face structure. Present only for connected graphs.
  bool has_faces() const { return !faces_.empty(); }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(FaceId f) const { return faces_[f]; }
  FaceId outer_face() const { return outer_; }
  int hole_count() const { return static_cast<int>(holes_.size()); }
  int square_count() const { return static_cast<int>(squares_.size()); }
  const std::vector<FaceId>& squares() const { return squares_; }  // row-major cells
  const std::vector<FaceId>& holes() const { return holes_; }
  FaceId square_at(Cell c) const;
  bool is_square(FaceId f) const { return faces_[f].kind == FaceKind::Square; }
  bool is_hole(FaceId f) const { return faces_[f].kind == FaceKind::Hole; }

  FaceId face_right_of(DartId d) const { return dart_face_[d]; }
  FaceId face_left_of(DartId d) const { return dart_face_[d ^ 1]; }
  // Dart oriented from the black endpoint to the white endpoint.
  DartId bw_dart(EdgeId e) const {
    return 2 * e + (edges_[e].black == edges_[e].u ? 0 : 1);
  }
  FaceId right_of_bw(EdgeId e) const { return dart_face_[bw_dart(e)]; }
  FaceId left_of_bw(EdgeId e) const { return dart_face_[bw_dart(e) ^ 1]; }

  bool edge_on_outer(EdgeId e) const {
    return dart_face_[2 * e] == outer_ || dart_face_[2 * e + 1] == outer_;
  }
  // Level change across the corner between consecutive orbit darts `into`
  // (ending at v) and `out_of` (leaving v): eps(v) * (q - 1), where q is the
  // number of quadrants the face occupies at this passage.
  int corner_increment(DartId into, DartId out_of) const;
  // Doubled-convention reference level along the unbounded face, one value per
  // outer edge, independent of any cover. The walk starts at the
  // lexicographically least boundary vertex, outgoing dart by E,N,W,S priority.
  int boundary_value(EdgeId e) const;
  // Closing mismatch of the reference-level walk. Zero on hole-free balanced
  // graphs; with holes it equals minus the sum of the hole periods.
  int boundary_defect() const { return boundary_defect_; }
  // Outer orbit as a dart sequence beginning at the canonical start dart.
  const std::vector<DartId>& outer_walk() const { return outer_walk_; }

  // Fixed dual integration path from the outer face to each hole, chosen once
  // per graph: BFS over face adjacencies in deterministic order. Entry i is the
  // dart sequence crossed to reach holes()[i]; crossing dart d moves from the
  // face on d's left to the face on d's right.
  const std::vector<std::vector<DartId>>& hole_paths() const { return hole_paths_; }

  // Monodromy of the doubled height around holes()[i]: the corner increments
  // accumulated once around the hole orbit. Nonzero means no single-valued
  // height exists on this graph; face potentials are branch values and only
  // edge-local comparisons are meaningful.
  int hole_defect(int i) const { return hole_defects_[i]; }

  std::uint64_t content_hash() const;

 private:
  void build(std::vector<Point> pts);
  void build_faces();

  std::vector<Point> verts_;
  std::unordered_map<Point, VertexId, PointHash> index_;
  std::vector<Edge> edges_;
  std::vector<std::array<VertexId, 4>> nbr_;
  std::vector<std::array<EdgeId, 4>> edge_at_;
  std::vector<int> degree_;
  bool connected_ = false;
  bool two_connected_ = false;

  std::vector<Face> faces_;
  std::vector<FaceId> dart_face_;
  FaceId outer_ = -1;
  std::vector<FaceId> squares_;
  std::vector<FaceId> holes_;
  std::unordered_map<long long, FaceId> square_index_;
  std::vector<DartId> outer_walk_;
  std::vector<int> boundary_value_;  // per edge; 0 for non-outer edges
  int boundary_defect_ = 0;
  std::vector<std::vector<DartId>> hole_paths_;
  std::vector<int> hole_defects_;
};

// Free-function forms of the module operations.
GridGraph parse_grid(const std::string& mask);
bool check_two_connected(const GridGraph& g);

}  // namespace gridham
