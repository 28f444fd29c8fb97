#include "gridham/cover.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "gridham/check.hpp"

namespace gridham {

namespace {

// Dinic max-flow; unit arcs for edges, demand arcs for vertices.
struct Dinic {
  struct Arc {
    int to;
    int cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj;
  std::vector<int> level, it;

  explicit Dinic(int n) : adj(n), level(n), it(n) {}

  void add(int a, int b, int cap) {
    adj[a].push_back({b, cap, static_cast<int>(adj[b].size())});
    adj[b].push_back({a, 0, static_cast<int>(adj[a].size()) - 1});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::vector<int> q{s};
    level[s] = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const int v = q[i];
      for (const Arc& a : adj[v]) {
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[v] + 1;
          q.push_back(a.to);
        }
      }
    }
    return level[t] >= 0;
  }

  int dfs(int v, int t, int f) {
    if (v == t) return f;
    for (int& i = it[v]; i < static_cast<int>(adj[v].size()); ++i) {
      Arc& a = adj[v][i];
      if (a.cap > 0 && level[a.to] == level[v] + 1) {
        const int d = dfs(a.to, t, std::min(f, a.cap));
        if (d > 0) {
          a.cap -= d;
          adj[a.to][a.rev].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  long long maxflow(int s, int t) {
    long long flow = 0;
    while (bfs(s, t)) {
      std::fill(it.begin(), it.end(), 0);
      while (int f = dfs(s, t, 1 << 30)) flow += f;
    }
    return flow;
  }
};

VertexId tail_of(const GridGraph& g, DartId d) {
  const Edge& e = g.edge(dart_edge(d));
  return (d & 1) ? e.v : e.u;
}

}  // namespace

CycleCover::CycleCover(const GridGraph& g, std::vector<char> in_cover)
    : g_(&g), in_cover_(std::move(in_cover)) {
  GH_CHECK(static_cast<int>(in_cover_.size()) == g.edge_count());
  const int n = g.vertex_count();
  std::vector<std::array<VertexId, 2>> nb(n, {-1, -1});
  std::vector<int> deg(n, 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!in_cover_[e]) continue;
    const Edge& ed = g.edge(e);
    GH_CHECK(deg[ed.u] < 2 && deg[ed.v] < 2);
    nb[ed.u][deg[ed.u]++] = ed.v;
    nb[ed.v][deg[ed.v]++] = ed.u;
  }
  for (int v = 0; v < n; ++v) GH_CHECK(deg[v] == 2);

  cycle_of_.assign(n, -1);
  for (VertexId s = 0; s < n; ++s) {
    if (cycle_of_[s] != -1) continue;
    const int id = static_cast<int>(cycles_.size());
    std::vector<VertexId> cyc;
    VertexId prev = -1;
    VertexId cur = s;
    do {
      cycle_of_[cur] = id;
      cyc.push_back(cur);
      VertexId nxt = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
      if (prev == -1) nxt = std::min(nb[cur][0], nb[cur][1]);
      prev = cur;
      cur = nxt;
    } while (cur != s);
    cycles_.push_back(std::move(cyc));
  }
  p_ = static_cast<int>(cycles_.size());
}

std::optional<std::vector<char>> find_phi_factor(const GridGraph& g,
                                                 const std::vector<int>& phi) {
  GH_CHECK(static_cast<int>(phi.size()) == g.vertex_count());
  const int n = g.vertex_count();
  long long need_black = 0, need_white = 0;
  for (VertexId v = 0; v < n; ++v) {
    GH_CHECK(phi[v] >= 0);
    if (phi[v] > g.degree(v)) return std::nullopt;
    (g.color(v) == VertexColor::Black ? need_black : need_white) += phi[v];
  }
  if (need_black != need_white) return std::nullopt;

  Dinic net(n + 2);
  const int src = n, snk = n + 1;
  for (VertexId v = 0; v < n; ++v) {
    if (g.color(v) == VertexColor::Black) {
      net.add(src, v, phi[v]);
    } else {
      net.add(v, snk, phi[v]);
    }
  }
  std::vector<std::pair<int, int>> unit_arc(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    unit_arc[e] = {ed.black, static_cast<int>(net.adj[ed.black].size())};
    net.add(ed.black, ed.white, 1);
  }
  if (net.maxflow(src, snk) != need_black) return std::nullopt;

  std::vector<char> res(g.edge_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    res[e] = net.adj[unit_arc[e].first][unit_arc[e].second].cap == 0 ? 1 : 0;
  }
  return res;
}

std::optional<CycleCover> find_initial_cover(const GridGraph& g) {
  auto f = find_phi_factor(g, std::vector<int>(g.vertex_count(), 2));
  if (!f) return std::nullopt;
  return CycleCover(g, std::move(*f));
}

Chain1 omega(const CycleCover& h) {
  Chain1 c;
  for (EdgeId e = 0; e < h.graph().edge_count(); ++e) {
    if (h.contains(e)) c.set(e, Rat{1});
  }
  return c;
}

BoundarySet boundary_faces(const CycleCover& h) {
  const GridGraph& g = h.graph();
  GH_CHECK(g.has_faces());
  BoundarySet out;
  for (FaceId f = 0; f < static_cast<FaceId>(g.faces().size()); ++f) {
    const Face& face = g.face(f);
    int distinct = 0;
    {
      std::vector<int> seen;
      for (DartId d : face.darts) {
        const int c = h.cycle_of(tail_of(g, d));
        if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
      }
      distinct = static_cast<int>(seen.size());
    }
    if (distinct < 2) continue;
    out.faces.push_back(f);
    if (face.kind != FaceKind::Square) continue;

    BoundarySquare bs;
    bs.face = f;
    // Corners in clockwise order; edge i joins corner i to corner i+1.
    std::array<int, 4> cid{};
    std::array<EdgeId, 4> eid{};
    for (int i = 0; i < 4; ++i) {
      cid[i] = h.cycle_of(tail_of(g, face.darts[i]));
      eid[i] = dart_edge(face.darts[i]);
    }
    if (distinct >= 3) {
      bs.cls = BoundaryClass::Triple;
    } else {
      bs.cls = BoundaryClass::PlainBoundary;
      for (int i = 0; i < 4; ++i) {
        const int a = cid[i], b = cid[(i + 1) % 4];
        const int c = cid[(i + 2) % 4], d = cid[(i + 3) % 4];
        if (a == b && c == d && a != c) {
          // Two cycles on adjacent corner pairs; the same-cycle edges are the
          // opposite pair i and i+2. Critical when exactly one lies in H.
          const EdgeId within1 = eid[i], within2 = eid[(i + 2) % 4];
          if (h.contains(within1) != h.contains(within2)) {
            bs.cls = BoundaryClass::Critical;
            bs.edge_in = h.contains(within1) ? within1 : within2;
            bs.edge_out = h.contains(within1) ? within2 : within1;
          }
          break;
        }
        if (a != b && b == c && c == d) {
          // Lone corner i against three; a corner square carries both far
          // edges (the ones avoiding corner i) in H.
          if (h.contains(eid[(i + 1) % 4]) && h.contains(eid[(i + 2) % 4])) {
            bs.cls = BoundaryClass::Corner;
          }
          break;
        }
      }
    }
    out.squares.push_back(bs);
  }
  return out;
}

DifferenceSystem cover_system(const GridGraph& g, const std::vector<char>& h0) {
  GH_CHECK(g.has_faces());
  GH_CHECK(static_cast<int>(h0.size()) == g.edge_count());
  DifferenceSystem sys(static_cast<int>(g.faces().size()), g.outer_face());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const int l = g.left_of_bw(e), r = g.right_of_bw(e);
    const long long base = h0[e] ? 1 : 0;
    sys.add_arc(l, r, 1 - base);
    sys.add_arc(r, l, base);
  }
  return sys;
}

std::vector<char> cover_from_offsets(const GridGraph& g, const std::vector<char>& h0,
                                     const std::vector<long long>& a) {
  GH_CHECK(static_cast<int>(a.size()) == static_cast<int>(g.faces().size()));
  std::vector<char> res(g.edge_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const long long x = a[g.right_of_bw(e)] - a[g.left_of_bw(e)] + (h0[e] ? 1 : 0);
    GH_CHECK(x == 0 || x == 1);
    res[e] = static_cast<char>(x);
  }
  return res;
}

std::vector<EdgeStatus> classify_edges(const GridGraph& g, const std::vector<int>& phi) {
  auto base = find_phi_factor(g, phi);
  if (!base) throw EmptySpace{};
  const DifferenceSystem sys = cover_system(g, *base);
  const FaceClusterPartition part = face_clusters(sys);
  std::vector<EdgeStatus> out(g.edge_count(), EdgeStatus::Free);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const int l = g.left_of_bw(e), r = g.right_of_bw(e);
    if (!part.same(l, r)) continue;
    // Same cluster pins a(r) - a(l), hence the edge's membership.
    const long long x =
        part.offset_in_cluster[r] - part.offset_in_cluster[l] + ((*base)[e] ? 1 : 0);
    GH_CHECK(x == 0 || x == 1);
    out[e] = x == 1 ? EdgeStatus::FixedIn : EdgeStatus::FixedOut;
  }
  return out;
}

}  // namespace gridham
