#include "gridham/hamilton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <utility>

#include "gridham/check.hpp"
#include "gridham/diffsys.hpp"

namespace gridham {

namespace {

VertexId dart_tail(const GridGraph& g, DartId d) {
  const Edge& e = g.edge(dart_edge(d));
  return (d & 1) ? e.v : e.u;
}

FaceId face_across(const GridGraph& g, FaceId f, EdgeId e) {
  const FaceId r = g.face_right_of(2 * e);
  return r == f ? g.face_right_of(2 * e + 1) : r;
}

// Corner cycle labels in orbit order; consecutive entries are adjacent.
std::array<int, 4> corner_labels(const HeightState& s, FaceId f) {
  const auto& ds = s.graph().face(f).darts;
  GH_CHECK(ds.size() == 4);
  std::array<int, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = s.cycle_label(dart_tail(s.graph(), ds[i]));
  return out;
}

// A critical square has its two cycles on adjacent corner pairs and exactly
// one of the two same-cycle edges in the cover; the step arithmetic then
// makes it higher than all neighbors but one, or lower than all but one.
bool is_critical(const HeightState& s, FaceId f) {
  if (s.corner_label_count(f) != 2) return false;
  const auto lab = corner_labels(s, f);
  int breaks = 0, c0 = 0;
  for (int i = 0; i < 4; ++i) {
    breaks += lab[i] != lab[(i + 1) & 3];
    c0 += lab[i] == lab[0];
  }
  // Two breaks with a 2-2 split is the AABB family; ABAB has four breaks
  // and 3-1 splits fail the count. Both-edges or neither-edge configurations
  // are the extremal ones.
  if (breaks != 2 || c0 != 2) return false;
  return !s.local_max(f) && !s.local_min(f);
}

int ascent_count(const HeightState& s, FaceId f) {
  int ups = 0;
  for (int d = 0; d < kDirCount; ++d) {
    if (s.across(f, static_cast<Dir>(d)) > s.tau(f)) ++ups;
  }
  return ups;
}

Dir step_dir(const GridGraph& g, FaceId from, FaceId to) {
  const Cell a = g.face(from).cell;
  const Cell b = g.face(to).cell;
  if (b.x == a.x + 1 && b.y == a.y) return Dir::E;
  if (b.x == a.x - 1 && b.y == a.y) return Dir::W;
  if (b.y == a.y + 1 && b.x == a.x) return Dir::N;
  GH_CHECK(b.y == a.y - 1 && b.x == a.x);
  return Dir::S;
}

bool vertical_axis(const GridGraph& g, const Bridge& b) {
  GH_CHECK(b.squares.size() >= 2);
  const Dir d = step_dir(g, b.squares[0], b.squares[1]);
  return d == Dir::N || d == Dir::S;
}

// The reduction engine for one reduce_once call. Boundaries are recorded as
// forest nodes (originals are roots, each created node hangs off the bridge
// that made it); squares remember the node that first listed them.
struct Engine {
  HeightState& s;
  const GridGraph& g;
  std::vector<int> rank;        // face -> position in squares() order
  std::vector<char> stuck;      // per face
  std::vector<int> bridge_at;   // per face: bridge index + 1
  std::vector<int> node_at;     // per face: boundary node + 1
  std::vector<Bridge> bridges;
  std::vector<BoundaryNode> nodes;
  std::size_t first_created = 0;
  std::deque<FaceId> work;
  std::vector<char> seed_boundary;  // snapshot of boundary squares at entry
  int entry_p = 0;
  std::vector<long long> entry_sig;

  explicit Engine(HeightState& st)
      : s(st),
        g(st.graph()),
        rank(g.faces().size(), -1),
        stuck(g.faces().size(), 0),
        bridge_at(g.faces().size(), 0),
        node_at(g.faces().size(), 0),
        seed_boundary(g.faces().size(), 0) {
    const auto& sq = g.squares();
    for (std::size_t i = 0; i < sq.size(); ++i) rank[sq[i]] = static_cast<int>(i);
    entry_p = s.p();
    entry_sig = s.signature();
  }

  bool boundary(FaceId f) const { return s.corner_label_count(f) >= 2; }
  bool extremal(FaceId f) const { return s.local_max(f) || s.local_min(f); }

  // ---- phase A: hill climb ----
  // A boundary square that is a local extremum joins its two cycles at once.
  bool hill_climb() {
    for (const FaceId f : g.squares()) {
      if (boundary(f) && extremal(f)) {
        GH_LEMMA_CHECK(s.corner_label_count(f) == 2);
        s.z_transform(f);
        GH_LEMMA_CHECK(s.p() == entry_p - 1);
        return true;
      }
    }
    return false;
  }

  // ---- phase B: seed boundaries and the worklist ----
  void seed() {
    std::map<std::pair<int, int>, int> pair_node;
    for (const FaceId f : g.squares()) {
      if (!boundary(f)) continue;
      seed_boundary[f] = 1;
      // With no extremal boundary square, no square meets three cycles.
      GH_LEMMA_CHECK(s.corner_label_count(f) == 2);
      const auto lab = corner_labels(s, f);
      int la = lab[0], lb = -1;
      for (const int l : lab) {
        if (l != la) lb = l;
      }
      const std::pair<int, int> key = std::minmax(la, lb);
      auto it = pair_node.find(key);
      if (it == pair_node.end()) {
        nodes.push_back(BoundaryNode{true, -1, -1, {}});
        it = pair_node.emplace(key, static_cast<int>(nodes.size()) - 1).first;
      }
      nodes[it->second].squares.push_back(f);
      node_at[f] = it->second + 1;
      if (is_critical(s, f)) work.push_back(f);
    }
    first_created = nodes.size();
  }

  // ---- new-boundary discovery ----
  // After a split, its boundary is the set of squares whose corners meet
  // both pieces. The flood from the split square finds the edge-connected
  // part; any hole contact falls back to a full rescan, since the boundary
  // may continue on far rims.
  struct Discovery {
    std::vector<FaceId> squares;   // square order
    FaceId triple = -1;            // a square meeting three cycles, if any
    FaceId extremum = -1;          // an extremal non-bridge square, if any
  };

  bool has_both(FaceId f, int la, int lb) const {
    if (!g.is_square(f)) return false;
    const auto lab = corner_labels(s, f);
    bool a = false, b = false;
    for (const int l : lab) {
      a = a || l == la;
      b = b || l == lb;
    }
    return a && b;
  }

  bool touches_inner_hole(FaceId f) const {
    for (int d = 0; d < kDirCount; ++d) {
      const EdgeId e = s.edge_of(f, static_cast<Dir>(d));
      if (g.is_hole(face_across(g, f, e))) return true;
    }
    return false;
  }

  Discovery discover_boundary(FaceId fe, int la, int lb) {
    std::vector<FaceId> found;
    std::vector<char> seen(g.faces().size(), 0);
    std::queue<FaceId> q;
    q.push(fe);
    seen[fe] = 1;
    bool hole_contact = false;
    while (!q.empty()) {
      const FaceId f = q.front();
      q.pop();
      found.push_back(f);
      hole_contact = hole_contact || touches_inner_hole(f);
      for (int d = 0; d < kDirCount; ++d) {
        const FaceId n = s.square_step(f, static_cast<Dir>(d));
        if (n == -1 || seen[n]) continue;
        if (!has_both(n, la, lb)) continue;
        seen[n] = 1;
        q.push(n);
      }
    }
    if (hole_contact) {
      // The seam may resume beyond a hole; rescan everything.
      found.clear();
      for (const FaceId f : g.squares()) {
        if (has_both(f, la, lb)) found.push_back(f);
      }
      check_hole_trees(found);
    }
    std::sort(found.begin(), found.end(),
              [&](FaceId a, FaceId b) { return rank[a] < rank[b]; });
    if (!hole_contact && check_level() >= CheckLevel::Heavy) {
      // Away from holes the flood reaches every square on the seam.
      std::vector<FaceId> all;
      for (const FaceId f : g.squares()) {
        if (has_both(f, la, lb)) all.push_back(f);
      }
      GH_CHECK(found == all);
    }
    Discovery out;
    out.squares = std::move(found);
    for (const FaceId f : out.squares) {
      if (out.triple == -1 && s.corner_label_count(f) >= 3) out.triple = f;
      if (out.extremum == -1 && !bridge_at[f] && extremal(f)) out.extremum = f;
    }
    return out;
  }

  // Seam components end on hole rims; when no extremum turned up, the holes
  // they attach to must lie in one tree of the corridor forest.
  void check_hole_trees(const std::vector<FaceId>& seam) {
    if (check_level() < CheckLevel::Lemma) return;
    bool any_extremum = false;
    for (const FaceId f : seam) {
      if (!bridge_at[f] && extremal(f)) any_extremum = true;
    }
    if (any_extremum) return;
    const HoleForest forest = hole_forest(s);
    std::vector<int> node_index(g.faces().size(), -1);
    for (std::size_t i = 0; i < forest.nodes.size(); ++i) {
      node_index[forest.nodes[i]] = static_cast<int>(i);
    }
    int tree = -1;
    for (const FaceId f : seam) {
      for (int d = 0; d < kDirCount; ++d) {
        const EdgeId e = s.edge_of(f, static_cast<Dir>(d));
        if (s.contains(e)) continue;
        const FaceId across = face_across(g, f, e);
        if (!g.is_hole(across)) continue;
        const int t = forest.tree_of[node_index[across]];
        if (tree == -1) tree = t;
        GH_LEMMA_CHECK(tree == t);
      }
    }
  }

  // ---- joining moves ----

  RowRef odd_part(const Bridge& b) const {
    RowRef row;
    row.start = b.squares.front();
    row.kind = b.kind;
    row.length = static_cast<int>(b.squares.size()) - 1;
    row.squares.assign(b.squares.begin(), b.squares.end() - 1);
    row.dir = row.length >= 2 ? step_dir(g, b.squares[0], b.squares[1]) : Dir::E;
    return row;
  }

  void join_by_row(const RowRef& row, std::vector<std::vector<FaceId>>& msets) {
    const int before = s.p();
    s.move_row(row);
    GH_LEMMA_CHECK(s.p() == before - 1);
    msets.push_back(row.squares);
  }

  void join_by_square(FaceId f, std::vector<std::vector<FaceId>>& msets) {
    const int before = s.p();
    s.z_transform(f);
    GH_LEMMA_CHECK(s.p() == before - 1);
    msets.push_back({f});
  }

  // The raised and lowered square sets must be pairwise disjoint and never
  // adjacent, so no move disturbs another's extremality.
  void check_disjoint(const std::vector<std::vector<FaceId>>& msets) const {
    if (check_level() < CheckLevel::Lemma) return;
    std::vector<int> owner(g.faces().size(), -1);
    for (std::size_t i = 0; i < msets.size(); ++i) {
      for (const FaceId f : msets[i]) {
        GH_LEMMA_CHECK(owner[f] == -1);
        owner[f] = static_cast<int>(i);
      }
    }
    for (std::size_t i = 0; i < msets.size(); ++i) {
      for (const FaceId f : msets[i]) {
        for (int d = 0; d < kDirCount; ++d) {
          const FaceId n = s.square_step(f, static_cast<Dir>(d));
          if (n == -1 || owner[n] == -1) continue;
          GH_LEMMA_CHECK(owner[n] == static_cast<int>(i));
        }
      }
    }
  }

  // After B_x is joined, eliminate every other created boundary in reverse
  // creation order -- across the next bridge on the root path for ancestors
  // of B_x, across its own creating bridge's far end otherwise -- and
  // finally join across the root of B_x's tree.
  void unwind(int x_node, std::vector<std::vector<FaceId>> msets) {
    std::vector<char> on_path(nodes.size(), 0);
    std::vector<int> path_bridge(nodes.size(), -1);
    int root = x_node;
    on_path[root] = 1;
    while (!nodes[root].original) {
      const int b = nodes[root].via_bridge;
      path_bridge[nodes[root].parent] = b;
      root = nodes[root].parent;
      on_path[root] = 1;
    }
    for (int i = static_cast<int>(nodes.size()) - 1;
         i >= static_cast<int>(first_created); --i) {
      if (i == x_node) continue;
      if (on_path[i]) {
        join_by_row(odd_part(bridges[path_bridge[i]]), msets);
      } else {
        const Bridge& b = bridges[nodes[i].via_bridge];
        join_by_square(b.squares.back(), msets);
      }
    }
    if (root != x_node) {
      join_by_row(odd_part(bridges[path_bridge[root]]), msets);
    }
    check_disjoint(msets);
    finish_reduced();
  }

  void finish_reduced() {
    GH_LEMMA_CHECK(s.p() == entry_p - 1);
    GH_LEMMA_CHECK(s.signature() == entry_sig);
    if (check_level() >= CheckLevel::Lemma) {
      // Unwinding removed every created boundary; survivors were already
      // boundary squares on entry.
      for (const FaceId f : g.squares()) {
        if (boundary(f)) GH_LEMMA_CHECK(seed_boundary[f]);
      }
      for (std::size_t i = first_created; i < nodes.size(); ++i) {
        for (const FaceId f : nodes[i].squares) GH_LEMMA_CHECK(!boundary(f));
      }
    }
    GH_HEAVY_CHECK((s.check_consistency(), true));
  }

  // A length-one half bridge: join at an extremal boundary square, unwind.
  // The square is both start and end of its row, so the beyond-a-bridge-end
  // substitution applies here too (one step only; the replacement square is
  // lateral to the old bridge, never beyond another end).
  void half_bridge(FaceId f) {
    const FaceId stepped = substitution(std::vector<FaceId>{f}, true);
    const FaceId target = stepped == -1 ? f : stepped;
    GH_LEMMA_CHECK(boundary(target) && extremal(target) && !bridge_at[target]);
    const int node = node_at[target] - 1;
    GH_CHECK(node >= 0);
    std::vector<std::vector<FaceId>> msets;
    join_by_square(target, msets);
    unwind(node, std::move(msets));
  }

  // Triple rule: a new boundary square f meeting three cycles redirects the
  // search across the edge joining two of its isolated corners; the square
  // there is extremal and joins at once.
  void handle_triple(FaceId f) {
    ++check_counters().triples;
    const auto& ds = g.face(f).darts;
    const auto lab = corner_labels(s, f);
    FaceId target = -1;
    for (int i = 0; i < 4 && target == -1; ++i) {
      const int j = (i + 1) & 3;
      if (lab[i] == lab[j]) continue;
      if (lab[i] == lab[(i + 3) & 3]) continue;  // corner i not isolated
      if (lab[j] == lab[(j + 1) & 3]) continue;  // corner j not isolated
      // Dart i runs from corner i to corner j; its edge joins the pair.
      const EdgeId e = dart_edge(ds[i]);
      const FaceId across = face_across(g, f, e);
      GH_LEMMA_CHECK(g.is_square(across));
      target = across;
    }
    GH_CHECK(target != -1);
    GH_LEMMA_CHECK(!bridge_at[target]);
    if (!node_at[target]) {
      node_at[target] = node_at[f];
      nodes[node_at[f] - 1].squares.push_back(target);
    }
    half_bridge(target);
  }

  // ---- half-bridge substitution ----
  // When a planned bridge or half bridge would start (or, for half bridges,
  // end) just beyond the end of an existing parallel bridge, use an extremal
  // square beside that end as a length-one half bridge instead.
  FaceId substitution(const std::vector<FaceId>& row_squares, bool odd) {
    std::vector<FaceId> probes{row_squares.front()};
    if (odd && row_squares.back() != row_squares.front()) {
      probes.push_back(row_squares.back());
    }
    for (const FaceId c : probes) {
      for (int d = 0; d < kDirCount; ++d) {
        const FaceId n = s.square_step(c, static_cast<Dir>(d));
        if (n == -1 || !bridge_at[n]) continue;
        const Bridge& b = bridges[bridge_at[n] - 1];
        const bool at_front = b.squares.front() == n;
        const bool at_back = b.squares.back() == n;
        if (!at_front && !at_back) continue;
        // c must continue b's line beyond that end.
        const FaceId inner = at_front ? b.squares[1] : b.squares[b.squares.size() - 2];
        if (step_dir(g, inner, n) != step_dir(g, n, c)) continue;
        return lateral_half_bridge(n, c);
      }
    }
    return -1;
  }

  FaceId lateral_half_bridge(FaceId end, FaceId beyond) {
    ++check_counters().substitutions;
    const Dir axis = step_dir(g, end, beyond);
    const Dir lat1 = (axis == Dir::N || axis == Dir::S) ? Dir::W : Dir::S;
    const Dir lat2 = (axis == Dir::N || axis == Dir::S) ? Dir::E : Dir::N;
    const FaceId a = s.square_step(end, lat1);
    const FaceId b = s.square_step(end, lat2);
    const FaceId a1 = s.square_step(beyond, lat1);
    const FaceId b1 = s.square_step(beyond, lat2);
    const auto length_one_bridge = [&](FaceId x, FaceId x1) {
      if (x == -1 || x1 == -1 || !bridge_at[x]) return false;
      const Bridge& br = bridges[bridge_at[x] - 1];
      return br.squares.size() == 2 &&
             ((br.squares[0] == x && br.squares[1] == x1) ||
              (br.squares[0] == x1 && br.squares[1] == x));
    };
    const auto starts_bridge = [&](FaceId x) {
      return x != -1 && bridge_at[x] &&
             bridges[bridge_at[x] - 1].squares.front() == x;
    };
    // A usable substitute joins two cycles on its own: an extremal boundary
    // square free of bridge markings.
    const auto usable = [&](FaceId x) {
      return x != -1 && boundary(x) && extremal(x) && !bridge_at[x];
    };
    const bool ba = length_one_bridge(a, a1);
    const bool bb = length_one_bridge(b, b1);
    GH_LEMMA_CHECK(!(ba && bb));
    FaceId half = -1;
    if (ba) {
      half = b;
    } else if (bb) {
      half = a;
    } else if (!usable(a)) {
      half = b;
    } else if (!usable(b)) {
      half = a;
    } else if (!starts_bridge(a1)) {
      half = a;
    } else if (!starts_bridge(b1)) {
      half = b;
    } else {
      // Bridges begin beyond both laterals. The unwind from the half bridge
      // consumes exactly one of them through its row, which contains the
      // square beside the lateral; join at the other lateral to keep the
      // join sets apart.
      const bool ca = on_unwind_path(a, a1);
      const bool cb = on_unwind_path(b, b1);
      GH_LEMMA_CHECK(!(ca && cb));
      half = ca ? b : a;
    }
    GH_CHECK(usable(half));
    return half;
  }

  // True iff the unwind rooted at x's boundary consumes the bridge starting
  // at x1 through its row (the bridges on the path to the root), rather than
  // through its far end.
  bool on_unwind_path(FaceId x, FaceId x1) const {
    const int bp = bridge_at[x1] - 1;
    int n = node_at[x] - 1;
    while (n >= 0 && !nodes[n].original) {
      if (nodes[n].via_bridge == bp) return true;
      n = nodes[n].parent;
    }
    return false;
  }

  // ---- the scan ----

  ReduceOutcome run() {
    ++check_counters().reduce_calls;
    if (hill_climb()) return ReduceOutcome{true, {}};
    seed();
    while (!work.empty()) {
      const FaceId f0 = work.front();
      work.pop_front();
      if (stuck[f0] || bridge_at[f0]) continue;
      if (!boundary(f0)) continue;
      GH_LEMMA_CHECK(s.corner_label_count(f0) == 2);
      if (extremal(f0)) {
        // An edge toggle next door turned this one extremal meanwhile.
        half_bridge(f0);
        return ReduceOutcome{true, {}};
      }
      if (!is_critical(s, f0)) continue;
      const int ups = ascent_count(s, f0);
      GH_CHECK(ups == 1 || ups == 3);
      const RowKind kind = ups == 1 ? RowKind::Maximal : RowKind::Minimal;
      const RowResult rr = s.row_from(f0, kind);
      if (rr.stuck) {
        for (const FaceId f : rr.row.squares) stuck[f] = 1;
        continue;
      }
      const bool odd = rr.row.length % 2 == 1;
      const FaceId stepped = substitution(rr.row.squares, odd);
      if (stepped != -1) {
        half_bridge(stepped);
        return ReduceOutcome{true, {}};
      }
      if (odd) {
        const int node = node_at[f0] - 1;
        GH_CHECK(node >= 0);
        std::vector<std::vector<FaceId>> msets;
        join_by_row(rr.row, msets);
        unwind(node, std::move(msets));
        return ReduceOutcome{true, {}};
      }
      create_bridge(rr.row);
      if (finished_) return ReduceOutcome{true, {}};
    }
    return stuck_certificate();
  }

  bool finished_ = false;

  void create_bridge(const RowRef& row) {
    const FaceId far = row.squares.back();
    GH_LEMMA_CHECK(!boundary(far));
    const int parent = node_at[row.start] - 1;
    GH_CHECK(parent >= 0);
    const int before = s.p();
    s.z_transform(far);
    GH_LEMMA_CHECK(s.p() == before + 1);
    const auto lab = corner_labels(s, far);
    int la = lab[0], lb = -1;
    for (const int l : lab) {
      if (l != la) lb = l;
    }
    GH_CHECK(lb != -1);

    const int bidx = static_cast<int>(bridges.size());
    const int child = static_cast<int>(nodes.size());
    nodes.push_back(BoundaryNode{false, parent, bidx, {}});
    bridges.push_back(Bridge{row.squares, row.kind, parent, child});
    ++check_counters().bridges_created;
    for (const FaceId f : row.squares) bridge_at[f] = bidx + 1;

    Discovery d = discover_boundary(far, la, lb);
    nodes[child].squares = d.squares;
    for (const FaceId f : d.squares) {
      if (!node_at[f]) node_at[f] = child + 1;
    }
    if (d.triple != -1) {
      handle_triple(d.triple);
      finished_ = true;
      return;
    }
    if (d.extremum != -1) {
      half_bridge(d.extremum);
      finished_ = true;
      return;
    }
    for (const FaceId f : d.squares) {
      if (!bridge_at[f] && !stuck[f] && is_critical(s, f)) work.push_back(f);
    }
  }

  // ---- stuck termination ----

  ReduceOutcome stuck_certificate() {
    MinCycleCertificate cert;
    cert.m = entry_p;
    GH_CHECK(s.p() == entry_p + static_cast<int>(bridges.size()));
    for (const Bridge& b : bridges) {
      const FaceId hi = b.squares[b.squares.size() - 2];
      const FaceId lo = b.squares.back();
      if (b.kind == RowKind::Maximal) {
        GH_LEMMA_CHECK(s.local_max(hi) && s.local_min(lo));
      } else {
        GH_LEMMA_CHECK(s.local_min(hi) && s.local_max(lo));
      }
      const Dir d = step_dir(g, hi, lo);
      GH_LEMMA_CHECK(s.contains(s.edge_of(hi, d)));
      cert.pairs.push_back(FixedPair{hi, lo});
    }
    verify_stuck_properties();
    for (const FaceId f : g.squares()) {
      if (stuck[f] && is_critical(s, f)) {
        cert.stuck.push_back(f);
        cert.stuck_boundary.push_back(node_at[f] - 1);
      }
    }
    cert.stuck_edges = s.cover_edges();

    // Roll the splits back: join across each created boundary in reverse
    // creation order through its own bridge's far end.
    for (int i = static_cast<int>(bridges.size()) - 1; i >= 0; --i) {
      const int before = s.p();
      s.z_transform(bridges[i].squares.back());
      GH_LEMMA_CHECK(s.p() == before - 1);
    }
    GH_LEMMA_CHECK(s.p() == entry_p);
    GH_LEMMA_CHECK(s.signature() == entry_sig);
    if (check_level() >= CheckLevel::Lemma) {
      for (const FaceId f : g.squares()) {
        GH_LEMMA_CHECK(boundary(f) == (seed_boundary[f] != 0));
      }
    }
    GH_HEAVY_CHECK((s.check_consistency(), true));
    return ReduceOutcome{false, std::move(cert)};
  }

  // The three stuck-state properties behind the certificate.
  void verify_stuck_properties() {
    if (check_level() < CheckLevel::Lemma) return;
    // 1. p = m + r with r bridges on disjoint squares (bridge_at is single
    //    valued by construction; recheck markers).
    for (std::size_t i = 0; i < bridges.size(); ++i) {
      for (const FaceId f : bridges[i].squares) {
        GH_LEMMA_CHECK(bridge_at[f] == static_cast<int>(i) + 1);
      }
    }
    // 2. Distinct bridges touch at most once, and only start beside start
    //    with parallel axes.
    std::map<std::pair<int, int>, int> contacts;
    for (std::size_t i = 0; i < bridges.size(); ++i) {
      for (const FaceId f : bridges[i].squares) {
        for (int d = 0; d < kDirCount; ++d) {
          const FaceId n = s.square_step(f, static_cast<Dir>(d));
          if (n == -1 || !bridge_at[n]) continue;
          const int j = bridge_at[n] - 1;
          if (j == static_cast<int>(i)) continue;
          GH_LEMMA_CHECK(bridges[i].squares.front() == f);
          GH_LEMMA_CHECK(bridges[j].squares.front() == n);
          GH_LEMMA_CHECK(vertical_axis(g, bridges[i]) == vertical_axis(g, bridges[j]));
          const std::pair<int, int> key = std::minmax(static_cast<int>(i), j);
          const int c = ++contacts[key];
          GH_LEMMA_CHECK(c <= 2);  // one adjacency, seen from both sides
        }
      }
    }
    // 3. Every critical boundary square is stuck or a bridge square; no
    //    square meets three cycles; no boundary extremum remains.
    for (const FaceId f : g.squares()) {
      if (!boundary(f)) continue;
      GH_LEMMA_CHECK(s.corner_label_count(f) == 2);
      GH_LEMMA_CHECK(!(extremal(f) && !bridge_at[f]));
      if (is_critical(s, f)) {
        GH_LEMMA_CHECK(stuck[f] || bridge_at[f]);
      }
    }
  }
};

}  // namespace

ReduceOutcome reduce_once(HeightState& s) {
  GH_CHECK(s.p() >= 2);
  Engine engine(s);
  return engine.run();
}

ReduceResult reduce_once(const CycleCover& h) {
  HeightState s(h);
  ReduceOutcome out = reduce_once(s);
  ReduceResult res;
  if (out.reduced) {
    res.reduced = s.cover();
  } else {
    res.certificate = std::move(out.certificate);
  }
  return res;
}

MinimizeResult minimize_in_component(const CycleCover& h) {
  HeightState s(h);
  const std::vector<long long> sig = s.signature();
  MinCycleCertificate cert;
  cert.m = 1;
  while (s.p() > 1) {
    ReduceOutcome out = reduce_once(s);
    GH_LEMMA_CHECK(s.signature() == sig);
    if (!out.reduced) {
      cert = std::move(out.certificate);
      break;
    }
  }
  if (s.p() == 1) {
    cert = MinCycleCertificate{};
    cert.m = 1;
    cert.stuck_edges = s.cover_edges();
  }
  GH_CHECK(s.p() == cert.m);
  return MinimizeResult{s.cover(), std::move(cert)};
}

SearchOutcome search_all_components(const GridGraph& g) {
  const std::optional<CycleCover> h0 = find_initial_cover(g);
  if (!h0) throw NoCover{};
  SearchOutcome out;
  const int m = g.hole_count();
  if (m == 0) {
    out.components.push_back(
        ComponentOutcome{signature_of(*h0), minimize_in_component(*h0)});
    out.signatures_tried = 1;
  } else {
    const DifferenceSystem base = cover_system(g, h0->edges());
    const std::vector<long long> hi =
        extremal_height(base, base.reference(), Extremal::Max);
    const std::vector<long long> lo =
        extremal_height(base, base.reference(), Extremal::Min);
    const std::vector<long long> sig0 = signature_of(*h0);
    long long box = 1;
    for (const FaceId h : g.holes()) {
      box *= hi[h] - lo[h] + 1;
      GH_CHECK(box > 0 && box < (1LL << 40));
    }
    out.signatures_tried = box;
    std::vector<long long> offset(m, 0);
    for (long long idx = 0; idx < box; ++idx) {
      long long rest = idx;
      for (int i = 0; i < m; ++i) {
        const long long span = hi[g.holes()[i]] - lo[g.holes()[i]] + 1;
        offset[i] = lo[g.holes()[i]] + rest % span;
        rest /= span;
      }
      DifferenceSystem pinned = cover_system(g, h0->edges());
      for (int i = 0; i < m; ++i) {
        pinned.pin_difference(pinned.reference(), g.holes()[i], offset[i]);
      }
      if (!exists_height(pinned)) continue;
      const std::vector<long long> a =
          extremal_height(pinned, pinned.reference(), Extremal::Max);
      const CycleCover rep(g, cover_from_offsets(g, h0->edges(), a));
      const std::vector<long long> sig = signature_of(rep);
      if (check_level() >= CheckLevel::Lemma) {
        for (int i = 0; i < m; ++i) {
          GH_LEMMA_CHECK(sig[i] == sig0[i] + 2 * offset[i]);
        }
      }
      out.components.push_back(ComponentOutcome{sig, minimize_in_component(rep)});
    }
    // Feasible signatures number at most 2^m |F|^(m/2).
    const double bound =
        std::pow(2.0, m) * std::pow(static_cast<double>(g.faces().size()),
                                    static_cast<double>(m) / 2.0);
    GH_LEMMA_CHECK(static_cast<double>(out.components.size()) <= bound + 0.5);
  }
  GH_CHECK(!out.components.empty());
  out.minimum = out.components.front().result.cover.p();
  out.best = 0;
  for (std::size_t i = 1; i < out.components.size(); ++i) {
    const int p = out.components[i].result.cover.p();
    if (p < out.minimum) {
      out.minimum = p;
      out.best = i;
    }
  }
  return out;
}

HamiltonVerdict is_hamiltonian(const GridGraph& g) {
  HamiltonVerdict v;
  if (!g.two_connected()) return v;
  try {
    v.search = search_all_components(g);
  } catch (const NoCover&) {
    return v;
  }
  if (v.search->minimum == 1) {
    v.hamiltonian = true;
    v.cycle = v.search->components[v.search->best].result.cover.cycles()[0];
  }
  return v;
}

HoleForest hole_forest(const HeightState& s) {
  const GridGraph& g = s.graph();
  HoleForest out;
  out.nodes.push_back(g.outer_face());
  for (const FaceId h : g.holes()) out.nodes.push_back(h);
  std::vector<int> node_index(g.faces().size(), -1);
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    node_index[out.nodes[i]] = static_cast<int>(i);
  }

  // Corridor squares: off every boundary, not extremal.
  std::vector<char> corridor(g.faces().size(), 0);
  for (const FaceId f : g.squares()) {
    corridor[f] = s.corner_label_count(f) == 1 && !s.local_max(f) && !s.local_min(f);
  }
  // Flood corridor components over edges outside the cover; collect the
  // nodes each component reaches the same way.
  std::vector<int> comp(g.faces().size(), -1);
  std::vector<std::vector<FaceId>> members;
  std::vector<std::vector<int>> contacts;  // node indices per component
  for (const FaceId f0 : g.squares()) {
    if (!corridor[f0] || comp[f0] != -1) continue;
    const int c = static_cast<int>(members.size());
    members.emplace_back();
    contacts.emplace_back();
    std::queue<FaceId> q;
    q.push(f0);
    comp[f0] = c;
    while (!q.empty()) {
      const FaceId f = q.front();
      q.pop();
      members[c].push_back(f);
      for (int d = 0; d < kDirCount; ++d) {
        const EdgeId e = s.edge_of(f, static_cast<Dir>(d));
        if (s.contains(e)) continue;
        const FaceId n = face_across(g, f, e);
        if (node_index[n] != -1) {
          if (contacts[c].empty() || contacts[c].back() != node_index[n]) {
            contacts[c].push_back(node_index[n]);
          }
          continue;
        }
        if (!g.is_square(n) || !corridor[n] || comp[n] != -1) continue;
        comp[n] = c;
        q.push(n);
      }
    }
    std::sort(contacts[c].begin(), contacts[c].end());
    contacts[c].erase(std::unique(contacts[c].begin(), contacts[c].end()),
                      contacts[c].end());
    GH_LEMMA_CHECK(contacts[c].size() <= 2);
  }

  // Union-find over nodes; corridors linking two nodes are forest edges.
  std::vector<int> parent(out.nodes.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  const std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (contacts[c].size() != 2) continue;
    const int na = contacts[c][0], nb = contacts[c][1];
    GH_LEMMA_CHECK(find(na) != find(nb));
    parent[find(na)] = find(nb);
    // Shortest corridor path rim to rim: BFS from every square touching
    // node na inside this component toward one touching nb.
    std::vector<int> from(g.faces().size(), -1);
    std::queue<FaceId> q;
    FaceId goal = -1;
    const auto touches = [&](FaceId f, int node) {
      for (int d = 0; d < kDirCount; ++d) {
        const EdgeId e = s.edge_of(f, static_cast<Dir>(d));
        if (s.contains(e)) continue;
        if (node_index[face_across(g, f, e)] == node) return true;
      }
      return false;
    };
    for (const FaceId f : members[c]) {
      if (touches(f, na)) {
        from[f] = f;
        q.push(f);
      }
    }
    while (!q.empty() && goal == -1) {
      const FaceId f = q.front();
      q.pop();
      if (touches(f, nb)) {
        goal = f;
        break;
      }
      for (int d = 0; d < kDirCount; ++d) {
        const EdgeId e = s.edge_of(f, static_cast<Dir>(d));
        if (s.contains(e)) continue;
        const FaceId n = face_across(g, f, e);
        if (!g.is_square(n) || comp[n] != static_cast<int>(c) || from[n] != -1) continue;
        from[n] = f;
        q.push(n);
      }
    }
    GH_CHECK(goal != -1);
    HoleLink link;
    link.a = out.nodes[na];
    link.b = out.nodes[nb];
    for (FaceId f = goal;;) {
      link.path.push_back(f);
      if (from[f] == f) break;
      f = from[f];
    }
    std::reverse(link.path.begin(), link.path.end());
    out.links.push_back(std::move(link));
  }

  out.overlap.assign(out.links.size(), std::vector<char>(out.links.size(), 0));
  for (std::size_t i = 0; i < out.links.size(); ++i) {
    std::vector<char> in(g.faces().size(), 0);
    for (const FaceId f : out.links[i].path) in[f] = 1;
    for (std::size_t j = i + 1; j < out.links.size(); ++j) {
      for (const FaceId f : out.links[j].path) {
        if (in[f]) {
          out.overlap[i][j] = out.overlap[j][i] = 1;
          break;
        }
      }
    }
  }

  out.tree_of.assign(out.nodes.size(), -1);
  int next_tree = 0;
  std::vector<int> tree_of_root(out.nodes.size(), -1);
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    const int r = find(static_cast<int>(i));
    if (tree_of_root[r] == -1) tree_of_root[r] = next_tree++;
    out.tree_of[i] = tree_of_root[r];
  }
  return out;
}

}  // namespace gridham
