#include "gridham/grid.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <sstream>

#include "gridham/check.hpp"

namespace gridham {

namespace {

Dir dart_dir(const Edge& e, bool reversed) {
  if (e.horizontal) return reversed ? Dir::W : Dir::E;
  return reversed ? Dir::S : Dir::N;
}

long long pack_cell(Cell c) {
  return (static_cast<long long>(static_cast<std::uint32_t>(c.x)) << 32) |
         static_cast<std::uint32_t>(c.y);
}

int eps(Point p) { return is_black(p) ? 1 : -1; }

}  // namespace

GridGraph GridGraph::parse(const std::string& mask) {
  std::vector<std::string> rows;
  int ox = 0, oy = 0;
  std::istringstream in(mask);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == ';') {
      std::istringstream cs(line.substr(1));
      std::string word;
      if (cs >> word && word == "origin") cs >> ox >> oy;
      continue;
    }
    rows.push_back(line);
  }
  while (!rows.empty() && rows.back().find('#') == std::string::npos) rows.pop_back();
  while (!rows.empty() && rows.front().find('#') == std::string::npos) rows.erase(rows.begin());
  std::vector<Point> pts;
  const int height = static_cast<int>(rows.size());
  for (int i = 0; i < height; ++i) {
    const std::string& r = rows[i];
    for (int j = 0; j < static_cast<int>(r.size()); ++j) {
      char c = r[j];
      if (c == '#') {
        pts.push_back(Point{j + ox, (height - 1 - i) + oy});
      } else if (c != '.' && c != ' ') {
        throw ParseError("unexpected character in mask: '" + std::string(1, c) + "'");
      }
    }
  }
  if (pts.empty()) throw ParseError("mask contains no vertices");
  return from_points(std::move(pts));
}

GridGraph GridGraph::from_points(std::vector<Point> pts) {
  GridGraph g;
  g.build(std::move(pts));
  return g;
}

void GridGraph::build(std::vector<Point> pts) {
  // Row-major reading order: y descending, then x ascending.
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    if (a.y != b.y) return a.y > b.y;
    return a.x < b.x;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  verts_ = std::move(pts);
  const int n = vertex_count();
  index_.reserve(verts_.size() * 2);
  for (int i = 0; i < n; ++i) index_.emplace(verts_[i], i);

  nbr_.assign(n, {-1, -1, -1, -1});
  edge_at_.assign(n, {-1, -1, -1, -1});
  degree_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (Dir d : {Dir::E, Dir::N}) {
      auto it = index_.find(step(verts_[i], d));
      if (it == index_.end()) continue;
      const int j = it->second;
      Edge e;
      e.u = i;
      e.v = j;
      e.horizontal = (d == Dir::E);
      e.black = is_black(verts_[i]) ? i : j;
      e.white = is_black(verts_[i]) ? j : i;
      const EdgeId id = static_cast<EdgeId>(edges_.size());
      edges_.push_back(e);
      nbr_[i][static_cast<int>(d)] = j;
      nbr_[j][static_cast<int>(opposite(d))] = i;
      edge_at_[i][static_cast<int>(d)] = id;
      edge_at_[j][static_cast<int>(opposite(d))] = id;
      ++degree_[i];
      ++degree_[j];
    }
  }

  // Connectivity.
  std::vector<char> seen(n, 0);
  if (n > 0) {
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int d = 0; d < kDirCount; ++d) {
        int w = nbr_[v][d];
        if (w >= 0 && !seen[w]) {
          seen[w] = 1;
          ++reached;
          q.push(w);
        }
      }
    }
    connected_ = (reached == n);
  }

  // Articulation points via iterative lowlink DFS.
  two_connected_ = connected_ && n >= 3;
  if (two_connected_) {
    std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), child_count(n, 0);
    std::vector<std::pair<int, int>> stack;  // vertex, next direction index
    int timer = 0;
    bool has_cut = false;
    stack.emplace_back(0, 0);
    disc[0] = low[0] = timer++;
    while (!stack.empty() && !has_cut) {
      auto& [v, di] = stack.back();
      if (di < kDirCount) {
        int w = nbr_[v][di];
        ++di;
        if (w < 0) continue;
        if (disc[w] == -1) {
          parent[w] = v;
          ++child_count[v];
          disc[w] = low[w] = timer++;
          stack.emplace_back(w, 0);
        } else if (w != parent[v]) {
          low[v] = std::min(low[v], disc[w]);
        }
      } else {
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().first;
          low[p] = std::min(low[p], low[v]);
          if (parent[p] != -1 && low[v] >= disc[p]) has_cut = true;
        }
      }
    }
    if (child_count[0] > 1) has_cut = true;
    two_connected_ = !has_cut;
  }

  if (connected_) build_faces();
}

void GridGraph::build_faces() {
  const int m = edge_count();
  dart_face_.assign(2 * m, -1);
  boundary_value_.assign(m, 0);

  if (m == 0) {
    Face outer;
    outer.kind = FaceKind::Outer;
    faces_.push_back(outer);
    outer_ = 0;
    return;
  }

  auto dart_tail = [&](DartId d) {
    const Edge& e = edges_[dart_edge(d)];
    return (d & 1) ? e.v : e.u;
  };
  auto dart_head = [&](DartId d) {
    const Edge& e = edges_[dart_edge(d)];
    return (d & 1) ? e.u : e.v;
  };
  // The successor of dart u->v leaves v along the first existing direction
  // counterclockwise after the reverse direction. Orbits traverse every face
  // clockwise, face interior on the right.
  auto next_dart = [&](DartId d) {
    const int v = dart_head(d);
    const Edge& e = edges_[dart_edge(d)];
    const int back = static_cast<int>(opposite(dart_dir(e, d & 1)));
    for (int k = 1; k <= 4; ++k) {
      const int dir = (back + k) % 4;
      const EdgeId ne = edge_at_[v][dir];
      if (ne < 0) continue;
      return static_cast<DartId>(2 * ne + (edges_[ne].u == v ? 0 : 1));
    }
    GH_CHECK(false && "dart head has no outgoing edge");
    return d;
  };

  std::vector<long long> area2;
  for (DartId d0 = 0; d0 < 2 * m; ++d0) {
    if (dart_face_[d0] != -1) continue;
    Face f;
    const FaceId id = static_cast<FaceId>(faces_.size());
    long long a2 = 0;
    DartId d = d0;
    do {
      dart_face_[d] = id;
      f.darts.push_back(d);
      const Point pu = verts_[dart_tail(d)];
      const Point pv = verts_[dart_head(d)];
      a2 += static_cast<long long>(pu.x) * pv.y - static_cast<long long>(pv.x) * pu.y;
      d = next_dart(d);
    } while (d != d0);
    faces_.push_back(std::move(f));
    area2.push_back(a2);
  }

  // Euler relation for a connected plane graph.
  GH_CHECK(vertex_count() - edge_count() + static_cast<int>(faces_.size()) == 2);

  // The unique orbit with positive signed area encloses everything else.
  outer_ = 0;
  for (FaceId f = 1; f < static_cast<FaceId>(faces_.size()); ++f) {
    if (area2[f] > area2[outer_]) outer_ = f;
  }
  faces_[outer_].kind = FaceKind::Outer;

  for (FaceId f = 0; f < static_cast<FaceId>(faces_.size()); ++f) {
    if (f == outer_) continue;
    Face& face = faces_[f];
    if (face.darts.size() == 4) {
      int minx = verts_[dart_tail(face.darts[0])].x;
      int miny = verts_[dart_tail(face.darts[0])].y;
      for (DartId d : face.darts) {
        minx = std::min(minx, verts_[dart_tail(d)].x);
        miny = std::min(miny, verts_[dart_tail(d)].y);
      }
      face.kind = FaceKind::Square;
      face.cell = Cell{minx, miny};
      for (DartId d : face.darts) {
        const Point p = verts_[dart_tail(d)];
        GH_CHECK((p.x == minx || p.x == minx + 1) && (p.y == miny || p.y == miny + 1));
      }
      square_index_.emplace(pack_cell(face.cell), f);
    } else {
      GH_CHECK(face.darts.size() > 4);
      face.kind = FaceKind::Hole;
    }
  }
  for (FaceId f = 0; f < static_cast<FaceId>(faces_.size()); ++f) {
    if (faces_[f].kind == FaceKind::Square) squares_.push_back(f);
    if (faces_[f].kind == FaceKind::Hole) holes_.push_back(f);
  }
  std::sort(squares_.begin(), squares_.end(), [&](FaceId a, FaceId b) {
    const Cell ca = faces_[a].cell, cb = faces_[b].cell;
    if (ca.y != cb.y) return ca.y > cb.y;
    return ca.x < cb.x;
  });

  // Distinct squares share at most one edge.
  for (FaceId f : squares_) {
    const auto& ds = faces_[f].darts;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (std::size_t j = i + 1; j < ds.size(); ++j) {
        const FaceId a = dart_face_[ds[i] ^ 1], b = dart_face_[ds[j] ^ 1];
        GH_CHECK(!(a == b && faces_[a].kind == FaceKind::Square));
      }
    }
  }

  // Canonical outer walk: start at the lexicographically least boundary
  // vertex, outgoing dart chosen by E,N,W,S priority.
  {
    const auto& od = faces_[outer_].darts;
    std::size_t best = 0;
    for (std::size_t i = 1; i < od.size(); ++i) {
      const Point a = verts_[dart_tail(od[i])], b = verts_[dart_tail(od[best])];
      if (a.x != b.x ? a.x < b.x : a.y < b.y) best = i;
    }
    const Point start = verts_[dart_tail(od[best])];
    for (std::size_t i = 0; i < od.size(); ++i) {
      if (verts_[dart_tail(od[i])] != start) continue;
      auto pri = [&](DartId d) {
        return static_cast<int>(dart_dir(edges_[dart_edge(d)], d & 1));
      };
      if (pri(od[i]) < pri(od[best])) best = i;
    }
    outer_walk_.assign(od.begin() + best, od.end());
    outer_walk_.insert(outer_walk_.end(), od.begin(), od.begin() + best);
    faces_[outer_].darts = outer_walk_;
  }

  // Reference level along the unbounded face, one corner increment per
  // passage. On simple convex or flat passes this is eps(v) * (4 - deg(v)).
  {
    int val = 0;
    boundary_value_[dart_edge(outer_walk_[0])] = 0;
    for (std::size_t i = 0; i + 1 < outer_walk_.size(); ++i) {
      val += corner_increment(outer_walk_[i], outer_walk_[i + 1]);
      boundary_value_[dart_edge(outer_walk_[i + 1])] = val;
    }
    boundary_defect_ = val + corner_increment(outer_walk_.back(), outer_walk_[0]);
  }

  // Fixed dual paths from the outer face to every hole: BFS over face
  // adjacency, neighbors visited in boundary-orbit order.
  if (!holes_.empty()) {
    std::vector<int> parent_dart(faces_.size(), -1);
    std::vector<char> vis(faces_.size(), 0);
    std::queue<FaceId> q;
    q.push(outer_);
    vis[outer_] = 1;
    while (!q.empty()) {
      FaceId f = q.front();
      q.pop();
      for (DartId d : faces_[f].darts) {
        // f is right of d, so crossing d^1 moves from f into the neighbor.
        const DartId cross = d ^ 1;
        const FaceId nb = dart_face_[cross];
        if (vis[nb]) continue;
        vis[nb] = 1;
        parent_dart[nb] = cross;
        q.push(nb);
      }
    }
    hole_paths_.resize(holes_.size());
    for (std::size_t i = 0; i < holes_.size(); ++i) {
      std::vector<DartId> rev;
      FaceId f = holes_[i];
      while (f != outer_) {
        const DartId cross = parent_dart[f];
        GH_CHECK(cross >= 0);
        rev.push_back(cross);
        f = dart_face_[cross ^ 1];  // face we crossed from (left of cross)
      }
      hole_paths_[i].assign(rev.rbegin(), rev.rend());
    }
  }

  // Height monodromy around each hole: corner increments once around the
  // orbit. Squares close by construction; holes may not.
  hole_defects_.assign(holes_.size(), 0);
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    const auto& ds = faces_[holes_[i]].darts;
    int val = 0;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      val += corner_increment(ds[k], ds[(k + 1) % ds.size()]);
    }
    hole_defects_[i] = val;
  }
}

std::optional<VertexId> GridGraph::vertex_at(Point p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> GridGraph::edge_between(Point a, Point b) const {
  auto va = vertex_at(a);
  if (!va) return std::nullopt;
  for (int d = 0; d < kDirCount; ++d) {
    int w = nbr_[*va][d];
    if (w >= 0 && verts_[w] == b) return edge_at_[*va][d];
  }
  return std::nullopt;
}

FaceId GridGraph::square_at(Cell c) const {
  auto it = square_index_.find(pack_cell(c));
  return it == square_index_.end() ? -1 : it->second;
}

int GridGraph::boundary_value(EdgeId e) const {
  GH_CHECK(edge_on_outer(e));
  return boundary_value_[e];
}

int GridGraph::corner_increment(DartId into, DartId out_of) const {
  const Edge& ei = edges_[dart_edge(into)];
  const Edge& eo = edges_[dart_edge(out_of)];
  const VertexId v = (into & 1) ? ei.u : ei.v;
  GH_CHECK(v == ((out_of & 1) ? eo.v : eo.u));
  const int back = static_cast<int>(opposite(dart_dir(ei, into & 1)));
  const int out = static_cast<int>(dart_dir(eo, out_of & 1));
  int q = (out - back) & 3;
  if (q == 0) q = 4;  // U-turn at a leaf
  return eps(verts_[v]) * (q - 1);
}

std::string GridGraph::serialize() const {
  int minx = verts_[0].x, maxx = verts_[0].x, miny = verts_[0].y, maxy = verts_[0].y;
  for (const Point& p : verts_) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  std::ostringstream out;
  if (minx != 0 || miny != 0) out << "; origin " << minx << ' ' << miny << '\n';
  for (int y = maxy; y >= miny; --y) {
    std::string row;
    for (int x = minx; x <= maxx; ++x) {
      row += index_.count(Point{x, y}) ? '#' : '.';
    }
    while (!row.empty() && row.back() == '.') row.pop_back();
    out << row << '\n';
  }
  return out.str();
}

std::uint64_t GridGraph::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : serialize()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

GridGraph parse_grid(const std::string& mask) { return GridGraph::parse(mask); }
bool check_two_connected(const GridGraph& g) { return g.two_connected(); }

}  // namespace gridham
