#include "gridham/diffsys.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

#include "gridham/check.hpp"

namespace gridham {

void DifferenceSystem::for_each_arc_from(int from,
                                         const std::function<void(const Arc&)>& fn) const {
  // head_/next_ store reverse insertion order; collect and replay forward.
  std::vector<int> ids;
  for (int a = head_[from]; a != -1; a = next_[a]) ids.push_back(a);
  for (auto it = ids.rbegin(); it != ids.rend(); ++it) fn(arcs_[*it]);
}

namespace {

constexpr long long kInf = (1LL << 62);

struct BellmanFord {
  std::vector<long long> dist;
  std::vector<int> parent_arc;
  std::vector<char> contaminated;  // reachable through some negative cycle
  std::vector<int> relax_heads;    // nodes still relaxed on the nth pass

  BellmanFord(const DifferenceSystem& sys, const std::vector<int>& sources) {
    const int n = sys.node_count();
    const auto& arcs = sys.arcs();
    dist.assign(n, kInf);
    parent_arc.assign(n, -1);
    contaminated.assign(n, 0);
    for (int s : sources) dist[s] = 0;
    for (int round = 0; round < n - 1; ++round) {
      bool changed = false;
      for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
        const auto& arc = arcs[a];
        if (dist[arc.from] == kInf) continue;
        if (dist[arc.from] + arc.cost < dist[arc.to]) {
          dist[arc.to] = dist[arc.from] + arc.cost;
          parent_arc[arc.to] = a;
          changed = true;
        }
      }
      if (!changed) return;
    }
    // A full nth pass: anything still relaxed lies behind a negative cycle,
    // and after this pass any cycle in the parent graph is negative.
    std::queue<int> spread;
    for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
      const auto& arc = arcs[a];
      if (dist[arc.from] == kInf) continue;
      if (dist[arc.from] + arc.cost < dist[arc.to]) {
        dist[arc.to] = dist[arc.from] + arc.cost;
        parent_arc[arc.to] = a;
        if (!contaminated[arc.to]) {
          contaminated[arc.to] = 1;
          relax_heads.push_back(arc.to);
          spread.push(arc.to);
        }
      }
    }
    while (!spread.empty()) {
      const int v = spread.front();
      spread.pop();
      sys.for_each_arc_from(v, [&](const DifferenceSystem::Arc& arc) {
        if (!contaminated[arc.to]) {
          contaminated[arc.to] = 1;
          spread.push(arc.to);
        }
      });
    }
  }

  bool any_contaminated() const {
    return std::find(contaminated.begin(), contaminated.end(), 1) != contaminated.end();
  }

  // Witness: a negative cycle reachable from the sources that also reaches
  // `target`. The parent chain from a node relaxed on the nth pass must loop,
  // the loop is negative, and it reaches everything that node's spread
  // contaminated; pick a head whose forward closure covers the target.
  std::vector<int> witness_cycle(const DifferenceSystem& sys, int target) const {
    const int n = static_cast<int>(dist.size());
    for (const int r : relax_heads) {
      std::vector<char> reach(n, 0);
      std::queue<int> q;
      reach[r] = 1;
      q.push(r);
      while (!q.empty()) {
        const int v = q.front();
        q.pop();
        sys.for_each_arc_from(v, [&](const DifferenceSystem::Arc& arc) {
          if (!reach[arc.to]) {
            reach[arc.to] = 1;
            q.push(arc.to);
          }
        });
      }
      if (!reach[target]) continue;
      std::vector<char> seen(n, 0);
      int x = r;
      while (!seen[x]) {
        seen[x] = 1;
        GH_CHECK(parent_arc[x] != -1);
        x = sys.arcs()[parent_arc[x]].from;
      }
      std::vector<int> cycle;
      int y = x;
      do {
        cycle.push_back(y);
        y = sys.arcs()[parent_arc[y]].from;
      } while (y != x);
      std::reverse(cycle.begin(), cycle.end());
      return cycle;
    }
    GH_CHECK(false && "contaminated target without a witness cycle");
    return {};
  }
};

DifferenceSystem reversed(const DifferenceSystem& sys) {
  DifferenceSystem rev(sys.node_count(), sys.reference());
  for (const auto& arc : sys.arcs()) rev.add_arc(arc.to, arc.from, arc.cost);
  return rev;
}

std::vector<int> all_nodes(const DifferenceSystem& sys) {
  std::vector<int> v(sys.node_count());
  for (int i = 0; i < sys.node_count(); ++i) v[i] = i;
  return v;
}

}  // namespace

ShortestOutcome shortest_distance(const DifferenceSystem& sys, int f1, int f2) {
  BellmanFord bf(sys, {f1});
  ShortestOutcome out;
  if (bf.dist[f2] == kInf) {
    out.kind = ShortestOutcome::Kind::Unreachable;
    return out;
  }
  if (bf.contaminated[f2]) {
    out.kind = ShortestOutcome::Kind::NegativeCycle;
    out.cycle = bf.witness_cycle(sys, f2);
    return out;
  }
  out.kind = ShortestOutcome::Kind::Distance;
  out.distance = bf.dist[f2];
  return out;
}

bool exists_height(const DifferenceSystem& sys) {
  return !BellmanFord(sys, all_nodes(sys)).any_contaminated();
}

std::vector<long long> extremal_height(const DifferenceSystem& sys, int f0, Extremal dir) {
  if (!exists_height(sys)) throw InfeasibleSystem{};
  if (dir == Extremal::Max) {
    BellmanFord bf(sys, {f0});
    for (long long d : bf.dist) {
      if (d == kInf) throw UnreachableFace{};
    }
    return bf.dist;
  }
  BellmanFord bf(reversed(sys), {f0});
  std::vector<long long> tau(sys.node_count());
  for (int v = 0; v < sys.node_count(); ++v) {
    if (bf.dist[v] == kInf) throw UnreachableFace{};
    tau[v] = -bf.dist[v];
  }
  return tau;
}

namespace {

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) {
    for (int i = 0; i < n; ++i) up[i] = i;
  }
  int find(int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void unite(int a, int b) { up[find(a)] = find(b); }
};

}  // namespace

FaceClusterPartition face_clusters(const DifferenceSystem& sys) {
  if (!exists_height(sys)) throw InfeasibleSystem{};
  const int n = sys.node_count();

  // D over every ordered arc-endpoint pair, via one single-source run per
  // node. Zero-slack cycles always pass through adjacent tight pairs, so
  // uniting adjacent pairs alone yields the full partition.
  UnionFind uf(n);
  std::vector<std::vector<long long>> dist_rows(n);
  for (int s = 0; s < n; ++s) dist_rows[s] = BellmanFord(sys, {s}).dist;
  for (const auto& arc : sys.arcs()) {
    const long long ab = dist_rows[arc.from][arc.to];
    const long long ba = dist_rows[arc.to][arc.from];
    if (ab != kInf && ba != kInf && ab == -ba) uf.unite(arc.from, arc.to);
  }

  FaceClusterPartition part;
  part.cluster_of.assign(n, -1);
  part.offset_in_cluster.assign(n, 0);
  std::vector<int> rep_of_cluster;
  for (int v = 0; v < n; ++v) {
    const int r = uf.find(v);
    if (part.cluster_of[r] == -1) {
      part.cluster_of[r] = part.cluster_count++;
      rep_of_cluster.push_back(r);
    }
    part.cluster_of[v] = part.cluster_of[r];
  }
  for (int v = 0; v < n; ++v) {
    // Same cluster means a tight cycle passes through both nodes, so the
    // representative reaches v and the offset is pinned.
    const int rep = rep_of_cluster[part.cluster_of[v]];
    GH_CHECK(dist_rows[rep][v] != kInf);
    part.offset_in_cluster[v] = dist_rows[rep][v];
  }
  return part;
}

std::vector<HeightMove> connect_heights(const DifferenceSystem& sys,
                                        std::vector<long long> tau1,
                                        const std::vector<long long>& tau2) {
  const int n = sys.node_count();
  GH_CHECK(static_cast<int>(tau1.size()) == n && static_cast<int>(tau2.size()) == n);
  const auto& arcs = sys.arcs();
  auto valid = [&](const std::vector<long long>& tau) {
    for (const auto& a : arcs) {
      if (tau[a.to] - tau[a.from] > a.cost) return false;
    }
    return true;
  };
  GH_CHECK(valid(tau1) && valid(tau2));

  std::vector<std::vector<int>> out_arcs(n), in_arcs(n);
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
    out_arcs[arcs[a].from].push_back(a);
    in_arcs[arcs[a].to].push_back(a);
  }

  std::vector<HeightMove> moves;
  std::vector<char> visited(n, 0);
  while (true) {
    int best = -1;
    long long best_abs = 0;
    for (int v = 0; v < n; ++v) {
      const long long d = std::llabs(tau1[v] - tau2[v]);
      if (d > best_abs) {
        best_abs = d;
        best = v;
      }
    }
    if (best == -1) break;

    std::fill(visited.begin(), visited.end(), 0);
    const long long chase_disc = tau1[best] - tau2[best];
    int cur = best;
    while (true) {
      if (visited[cur]) throw DifferentComponent{};
      visited[cur] = 1;
      const int delta = tau1[cur] > tau2[cur] ? -1 : 1;
      int blocked_by = -1;
      if (delta == -1) {
        // Lowering cur tightens arcs out of cur.
        for (int a : out_arcs[cur]) {
          if (tau1[arcs[a].to] - tau1[cur] == arcs[a].cost) {
            blocked_by = arcs[a].to;
            break;
          }
        }
      } else {
        for (int a : in_arcs[cur]) {
          if (tau1[cur] - tau1[arcs[a].from] == arcs[a].cost) {
            blocked_by = arcs[a].from;
            break;
          }
        }
      }
      if (blocked_by == -1) {
        tau1[cur] += delta;
        moves.push_back(HeightMove{cur, delta});
        break;
      }
      // Tightness in tau1 plus validity of tau2 forces the blocking neighbor
      // to carry exactly the maximal discrepancy, so the chase never stalls.
      GH_LEMMA_CHECK(tau1[blocked_by] - tau2[blocked_by] == chase_disc);
      cur = blocked_by;
    }
  }
  return moves;
}

}  // namespace gridham
