#include "gridham/height.hpp"

#include <algorithm>
#include <array>
#include <queue>

#include "gridham/check.hpp"

namespace gridham {

namespace {

// Two cover neighbors of v, by E,N,W,S scan.
std::array<VertexId, 2> cover_neighbors(const GridGraph& g, const std::vector<char>& h,
                                        VertexId v) {
  std::array<VertexId, 2> out{-1, -1};
  int k = 0;
  for (int d = 0; d < kDirCount; ++d) {
    const EdgeId e = g.edge_at(v, static_cast<Dir>(d));
    if (e < 0 || !h[e]) continue;
    GH_CHECK(k < 2);
    out[k++] = g.neighbor(v, static_cast<Dir>(d));
  }
  GH_CHECK(k == 2);
  return out;
}

// Walks the cover cycle through `start`, one vertex per advance.
struct CycleWalker {
  const GridGraph* g;
  const std::vector<char>* h;
  VertexId start, prev, cur;
  std::vector<VertexId> seen;
  bool done = false;

  CycleWalker(const GridGraph& gg, const std::vector<char>& hh, VertexId s)
      : g(&gg), h(&hh), start(s), prev(-1), cur(s) {
    seen.push_back(s);
  }
  void advance() {
    const auto nb = cover_neighbors(*g, *h, cur);
    const VertexId nxt = nb[0] == prev ? nb[1] : nb[0];
    prev = cur;
    cur = nxt;
    if (cur == start) {
      done = true;
    } else {
      seen.push_back(cur);
    }
  }
};

}  // namespace

HeightState::HeightState(const CycleCover& h) : g_(&h.graph()), in_cover_(h.edges()) {
  const GridGraph& g = *g_;
  GH_CHECK(g.has_faces());
  label_.assign(g.vertex_count(), -1);
  label_size_.assign(h.cycles().size(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    label_[v] = h.cycle_of(v);
  }
  for (const auto& cyc : h.cycles()) {
    label_size_[h.cycle_of(cyc.front())] = static_cast<long long>(cyc.size());
  }
  p_ = h.p();

  // Graph-fixed rim offsets along each hole: zero at the edge where the fixed
  // dual path enters, accumulating corner increments forward around the
  // orbit. Any nonzero closing defect (the hole's monodromy) lands in the
  // seam just before the entry dart, which no edge relation straddles.
  rim_offset_.assign(2 * g.edge_count(), 0);
  for (int hi = 0; hi < g.hole_count(); ++hi) {
    const FaceId hole = g.holes()[hi];
    const auto& darts = g.face(hole).darts;
    const std::size_t n = darts.size();
    const DartId entry = g.hole_paths()[hi].back();
    GH_CHECK(g.face_right_of(entry) == hole);
    std::size_t e0 = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (darts[i] == entry) {
        e0 = i;
        break;
      }
    }
    GH_CHECK(e0 < n);
    int acc = 0;
    rim_offset_[darts[e0]] = 0;
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t i = (e0 + k - 1) % n;
      const std::size_t j = (e0 + k) % n;
      acc += g.corner_increment(darts[i], darts[j]);
      rim_offset_[darts[j]] = acc;
    }
  }

  // Side edges of each square by direction.
  side_edge_.assign(g.faces().size(), {-1, -1, -1, -1});
  for (const FaceId f : g.squares()) {
    const Cell c = g.face(f).cell;
    const VertexId sw = *g.vertex_at(Point{c.x, c.y});
    const VertexId se = *g.vertex_at(Point{c.x + 1, c.y});
    const VertexId nw = *g.vertex_at(Point{c.x, c.y + 1});
    side_edge_[f][static_cast<int>(Dir::E)] = g.edge_at(se, Dir::N);
    side_edge_[f][static_cast<int>(Dir::N)] = g.edge_at(nw, Dir::E);
    side_edge_[f][static_cast<int>(Dir::W)] = g.edge_at(sw, Dir::N);
    side_edge_[f][static_cast<int>(Dir::S)] = g.edge_at(sw, Dir::E);
  }

  integrate();
}

void HeightState::integrate() {
  const GridGraph& g = *g_;
  tau_.assign(g.faces().size(), 0);
  std::vector<char> vis(g.faces().size(), 0);
  std::queue<FaceId> q;
  vis[g.outer_face()] = 1;
  q.push(g.outer_face());
  // This BFS mirrors the one that fixed hole_paths (same start, same dart
  // order), so each hole is first reached through its entry dart, where the
  // rim offset is zero: hole bases come out as the canonical path integrals.
  while (!q.empty()) {
    const FaceId f = q.front();
    q.pop();
    for (const DartId d : g.face(f).darts) {
      const EdgeId e = dart_edge(d);
      const FaceId to = g.face_right_of(d ^ 1);
      if (vis[to]) continue;
      // Crossing from the right of d to its left changes the edge-side value
      // by -1 if d is the black-to-white dart, +1 otherwise, times the cover
      // sign of the edge.
      const int omega = in_cover_[e] ? 1 : -1;
      const long long here = side_value_at(d);
      const long long there = here + (d == g.bw_dart(e) ? -omega : omega);
      tau_[to] = there - (g.is_hole(to) ? rim_offset_[d ^ 1] : 0);
      vis[to] = 1;
      q.push(to);
    }
  }
  for (FaceId f = 0; f < static_cast<FaceId>(g.faces().size()); ++f) GH_CHECK(vis[f]);
  // With no hole monodromy the branch values are single-valued, and the
  // per-edge relation across every edge validates the whole convention stack
  // (boundary values, rim offsets, integration, cover parity). Around a
  // defective hole no single-valued assignment satisfies every edge, so the
  // global check is meaningless there; tree edges hold by construction and
  // all ordering logic is edge-local anyway.
  bool single_valued = true;
  for (int hi = 0; hi < g.hole_count(); ++hi) {
    if (g.hole_defect(hi) != 0) single_valued = false;
  }
  if (single_valued) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      // A cut edge has the same face on both sides (and can lie on no cycle,
      // so never in a cover); the two-sided relation needs distinct sides.
      if (g.face_right_of(2 * e) == g.face_right_of(2 * e + 1)) continue;
      GH_CHECK(side_value_right(e) - side_value_left(e) == (in_cover_[e] ? 1 : -1));
    }
  }
}

long long HeightState::side_value_at(DartId d) const {
  const GridGraph& g = *g_;
  const FaceId f = g.face_right_of(d);
  if (f == g.outer_face()) return g.boundary_value(dart_edge(d));
  if (g.is_hole(f)) return tau_[f] + rim_offset_[d];
  return tau_[f];
}

long long HeightState::tau(FaceId f) const { return tau_[f]; }

long long HeightState::side_value_right(EdgeId e) const {
  return side_value_at(g_->bw_dart(e));
}
long long HeightState::side_value_left(EdgeId e) const {
  return side_value_at(g_->bw_dart(e) ^ 1);
}

EdgeId HeightState::edge_of(FaceId square, Dir d) const {
  return side_edge_[square][static_cast<int>(d)];
}

long long HeightState::across(FaceId square, Dir d) const {
  // Edge-local: the neighbor sits one above or one below by the cover rule,
  // regardless of any branch ambiguity in its own stored value.
  const EdgeId e = edge_of(square, d);
  const int x = in_cover_[e] ? 1 : -1;
  const int step = g_->face_right_of(g_->bw_dart(e)) == square ? -x : x;
  return tau_[square] + step;
}

FaceId HeightState::square_step(FaceId square, Dir d) const {
  const EdgeId e = edge_of(square, d);
  const FaceId a = g_->face_right_of(2 * e), b = g_->face_right_of(2 * e + 1);
  const FaceId other = a == square ? b : a;
  return g_->is_square(other) ? other : -1;
}

bool HeightState::local_max(FaceId square) const {
  for (int d = 0; d < kDirCount; ++d) {
    if (across(square, static_cast<Dir>(d)) > tau_[square]) return false;
  }
  return true;
}

bool HeightState::local_min(FaceId square) const {
  for (int d = 0; d < kDirCount; ++d) {
    if (across(square, static_cast<Dir>(d)) < tau_[square]) return false;
  }
  return true;
}

std::pair<std::vector<FaceId>, std::vector<FaceId>> HeightState::local_extrema() const {
  std::pair<std::vector<FaceId>, std::vector<FaceId>> out;
  for (const FaceId f : g_->squares()) {
    if (local_max(f)) out.first.push_back(f);
    if (local_min(f)) out.second.push_back(f);
  }
  return out;
}

int HeightState::corner_label_count(FaceId square) const {
  std::array<int, 4> l{};
  int n = 0;
  for (const DartId d : g_->face(square).darts) {
    const Edge& e = g_->edge(dart_edge(d));
    const int lab = label_[(d & 1) ? e.v : e.u];
    bool seen = false;
    for (int i = 0; i < n; ++i) seen = seen || l[i] == lab;
    if (!seen) l[n++] = lab;
  }
  return n;
}

int HeightState::fresh_label() {
  label_size_.push_back(0);
  return static_cast<int>(label_size_.size()) - 1;
}

void HeightState::z_transform(FaceId square) {
  const GridGraph& g = *g_;
  const bool is_max = local_max(square);
  const bool is_min = !is_max && local_min(square);
  if (!is_max && !is_min) throw NotExtremal{};

  std::array<VertexId, 4> corner{};
  std::array<EdgeId, 4> side{};
  for (int i = 0; i < 4; ++i) {
    const DartId d = g.face(square).darts[i];
    const Edge& e = g.edge(dart_edge(d));
    corner[i] = (d & 1) ? e.v : e.u;
    side[i] = dart_edge(d);
  }

  int la = label_[corner[0]], lb = -1;
  for (int i = 1; i < 4; ++i) {
    const int l = label_[corner[i]];
    if (l != la) {
      GH_CHECK(lb == -1 || lb == l);
      lb = l;
    }
  }

  if (lb != -1) {
    // Two cycles meet the square; the move joins them. Relabel the smaller,
    // walked before the edges change.
    int small = la, big = lb;
    if (label_size_[small] > label_size_[big]) std::swap(small, big);
    VertexId seed = -1;
    for (int i = 0; i < 4; ++i) {
      if (label_[corner[i]] == small) seed = corner[i];
    }
    CycleWalker w(g, in_cover_, seed);
    while (!w.done) w.advance();
    for (const EdgeId e : side) in_cover_[e] ^= 1;
    for (const VertexId v : w.seen) label_[v] = big;
    label_size_[big] += label_size_[small];
    label_size_[small] = 0;
    p_ -= 1;
  } else {
    // One cycle splits in two. The freshly added cover edges seed the two
    // pieces; walk both in lockstep and relabel whichever closes first.
    std::array<EdgeId, 2> added{-1, -1};
    int n = 0;
    for (const EdgeId e : side) {
      if (!in_cover_[e]) added[n++] = e;
    }
    GH_CHECK(n == 2);
    for (const EdgeId e : side) in_cover_[e] ^= 1;
    CycleWalker w1(g, in_cover_, g.edge(added[0]).u);
    CycleWalker w2(g, in_cover_, g.edge(added[1]).u);
    for (;;) {
      w1.advance();
      if (w1.done) break;
      w2.advance();
      if (w2.done) break;
    }
    CycleWalker& closed = w1.done ? w1 : w2;
    const int nl = fresh_label();
    for (const VertexId v : closed.seen) label_[v] = nl;
    label_size_[nl] = static_cast<long long>(closed.seen.size());
    label_size_[la] -= label_size_[nl];
    GH_CHECK(label_size_[la] >= 3);
    p_ += 1;
  }

  tau_[square] += is_max ? -2 : 2;
}

RowResult HeightState::row_from(FaceId start, RowKind kind) const {
  const int up = kind == RowKind::Maximal ? 1 : -1;
  RowResult res;
  res.row.start = start;
  res.row.kind = kind;
  res.row.squares.push_back(start);

  int ahead = -1;
  for (int d = 0; d < kDirCount; ++d) {
    if ((across(start, static_cast<Dir>(d)) - tau_[start]) * up > 0) {
      if (ahead != -1) throw RowInvalidated{};
      ahead = d;
    }
  }
  if (ahead == -1) {
    // Strict extremum: the degenerate length-one row.
    res.row.length = 1;
    return res;
  }
  res.row.dir = static_cast<Dir>(ahead);

  FaceId cur = start;
  for (;;) {
    const long long v = across(cur, res.row.dir);
    const FaceId next = square_step(cur, res.row.dir);
    if ((v - tau_[cur]) * up < 0) {
      res.stop_face = next;  // may be -1 for a non-square face
      if (next == -1) {
        const EdgeId e = edge_of(cur, res.row.dir);
        res.stop_face = g_->face_right_of(2 * e) == cur ? g_->face_right_of(2 * e + 1)
                                                        : g_->face_right_of(2 * e);
      }
      break;
    }
    if (next == -1) {
      // Ascending into a hole or the outer face: nothing movable here.
      const EdgeId e = edge_of(cur, res.row.dir);
      res.stop_face = g_->face_right_of(2 * e) == cur ? g_->face_right_of(2 * e + 1)
                                                      : g_->face_right_of(2 * e);
      res.stuck = true;
      break;
    }
    if (corner_label_count(next) >= 2) {
      // A boundary square blocks the run.
      res.stop_face = next;
      res.stuck = true;
      break;
    }
    res.row.squares.push_back(next);
    cur = next;
  }
  res.row.length = static_cast<int>(res.row.squares.size());
  return res;
}

void HeightState::move_row(const RowRef& row) {
  // Revalidate by rebuilding the run from its start.
  RowResult now;
  try {
    now = row_from(row.start, row.kind);
  } catch (const RowInvalidated&) {
    throw;
  }
  if (now.stuck || now.row.length != row.length || now.row.squares != row.squares) {
    throw RowInvalidated{};
  }
  // Interior squares of a movable run sit on a single cycle.
  for (std::size_t i = 1; i < row.squares.size(); ++i) {
    GH_LEMMA_CHECK(corner_label_count(row.squares[i]) == 1);
  }
  for (int i = row.length - 1; i >= 0; --i) {
    z_transform(row.squares[i]);
  }
}

std::vector<long long> HeightState::signature() const {
  std::vector<long long> sig;
  sig.reserve(g_->hole_count());
  for (const FaceId h : g_->holes()) sig.push_back(tau_[h]);
  return sig;
}

CycleCover HeightState::cover() const { return CycleCover(*g_, in_cover_); }

void HeightState::check_consistency() const {
  HeightState fresh(cover());
  GH_CHECK(fresh.p_ == p_);
  GH_CHECK(fresh.tau_ == tau_);
  // Labels must induce the same partition.
  std::vector<int> map_mine(label_size_.size(), -1);
  for (VertexId v = 0; v < g_->vertex_count(); ++v) {
    const int a = label_[v], b = fresh.label_[v];
    if (map_mine[a] == -1) map_mine[a] = b;
    GH_CHECK(map_mine[a] == b);
    GH_CHECK(label_size_[a] == fresh.label_size_[b]);
  }
  // Hole bases must equal the height integrated explicitly along the fixed
  // paths, crossing each dart left to right and walking rim profiles through
  // intermediate holes.
  for (int hi = 0; hi < g_->hole_count(); ++hi) {
    const auto& path = g_->hole_paths()[hi];
    long long v = g_->boundary_value(dart_edge(path.front()));
    for (std::size_t k = 0; k < path.size(); ++k) {
      const DartId d = path[k];
      const EdgeId e = dart_edge(d);
      const int x = in_cover_[e] ? 1 : -1;
      v += d == g_->bw_dart(e) ? x : -x;
      const FaceId f = g_->face_right_of(d);
      if (k + 1 < path.size() && g_->is_hole(f)) {
        v += rim_offset_[path[k + 1] ^ 1] - rim_offset_[d];
      }
    }
    GH_CHECK(v == tau_[g_->holes()[hi]]);
  }
}

HeightState height_of(const CycleCover& h) { return HeightState(h); }

std::pair<std::vector<FaceId>, std::vector<FaceId>> local_extrema(const HeightState& s) {
  return s.local_extrema();
}

std::vector<long long> signature_of(const CycleCover& h) {
  return HeightState(h).signature();
}

}  // namespace gridham
