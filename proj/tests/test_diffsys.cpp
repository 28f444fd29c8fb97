#include <algorithm>
#include <cstdlib>
#include <random>
#include <vector>

#include "doctest.h"
#include "gridham/diffsys.hpp"

using namespace gridham;

namespace {

constexpr long long kBig = 1LL << 40;

struct DenseSystem {
  int n = 0;
  std::vector<std::vector<long long>> cost;  // cost[a][b] = min arc cost, kBig if none

  explicit DenseSystem(const DifferenceSystem& sys)
      : n(sys.node_count()), cost(sys.node_count(), std::vector<long long>(sys.node_count(), kBig)) {
    for (const auto& a : sys.arcs()) cost[a.from][a.to] = std::min(cost[a.from][a.to], a.cost);
  }
};

// Minimum cost over simple paths, by DFS.
long long best_simple_path(const DenseSystem& d, int from, int to, std::vector<char>& used) {
  if (from == to) return 0;
  long long best = kBig;
  used[from] = 1;
  for (int v = 0; v < d.n; ++v) {
    if (used[v] || d.cost[from][v] >= kBig) continue;
    const long long rest = best_simple_path(d, v, to, used);
    if (rest < kBig) best = std::min(best, d.cost[from][v] + rest);
  }
  used[from] = 0;
  return best;
}

bool reach(const DenseSystem& d, int from, int to) {
  std::vector<char> vis(d.n, 0);
  std::vector<int> q{from};
  vis[from] = 1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == to) return true;
    for (int v = 0; v < d.n; ++v) {
      if (!vis[v] && d.cost[q[i]][v] < kBig) {
        vis[v] = 1;
        q.push_back(v);
      }
    }
  }
  return vis[to];
}

// True iff a negative-total simple cycle exists that is reachable from f1 and
// reaches f2.
bool neg_cycle_dfs(const DenseSystem& d, int anchor, int cur, long long acc,
                   std::vector<char>& used, int f1, int f2) {
  for (int v = 0; v < d.n; ++v) {
    if (d.cost[cur][v] >= kBig) continue;
    if (v == anchor && acc + d.cost[cur][v] < 0) return true;
    if (v > anchor && !used[v]) {
      used[v] = 1;
      const bool hit = neg_cycle_dfs(d, anchor, v, acc + d.cost[cur][v], used, f1, f2);
      used[v] = 0;
      if (hit) return true;
    }
  }
  return false;
}

bool contaminating_cycle(const DenseSystem& d, int f1, int f2) {
  for (int a = 0; a < d.n; ++a) {
    if (!reach(d, f1, a) || !reach(d, a, f2)) continue;
    // Restrict the cycle search to nodes on f1->f2 routes through a.
    DenseSystem r = d;
    for (int v = 0; v < d.n; ++v) {
      if (reach(d, f1, v) && reach(d, v, f2)) continue;
      for (int w = 0; w < d.n; ++w) r.cost[v][w] = r.cost[w][v] = kBig;
    }
    std::vector<char> used(d.n, 0);
    used[a] = 1;
    if (neg_cycle_dfs(r, a, a, 0, used, f1, f2)) return true;
  }
  return false;
}

DifferenceSystem random_system(std::mt19937& rng, int n, int arcs) {
  DifferenceSystem sys(n, 0);
  for (int i = 0; i < arcs; ++i) {
    const int a = static_cast<int>(rng() % n);
    int b = static_cast<int>(rng() % n);
    if (a == b) b = (b + 1) % n;
    sys.add_arc(a, b, static_cast<long long>(rng() % 7) - 3);
  }
  return sys;
}

// All assignments over [-span, span]^n with value[0] = 0, passed to fn.
template <typename Fn>
void for_all_assignments(int n, int span, Fn&& fn) {
  std::vector<long long> v(n, -span);
  v[0] = 0;
  for (;;) {
    fn(const_cast<const std::vector<long long>&>(v));
    int i = 1;
    while (i < n && v[i] == span) v[i++] = -span;
    if (i == n) break;
    ++v[i];
  }
}

bool satisfies(const DifferenceSystem& sys, const std::vector<long long>& v) {
  for (const auto& a : sys.arcs()) {
    if (v[a.to] - v[a.from] > a.cost) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("shortest distance matches the simple-path oracle") {
  std::mt19937 rng(11);
  int distances = 0, cycles = 0, unreachable = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const DifferenceSystem sys = random_system(rng, n, 1 + static_cast<int>(rng() % (2 * n)));
    const DenseSystem d(sys);
    const int f1 = static_cast<int>(rng() % n);
    const int f2 = static_cast<int>(rng() % n);
    const ShortestOutcome out = shortest_distance(sys, f1, f2);
    std::vector<char> used(n, 0);
    const long long oracle = best_simple_path(d, f1, f2, used);
    if (oracle >= kBig) {
      CHECK(out.kind == ShortestOutcome::Kind::Unreachable);
      ++unreachable;
    } else if (contaminating_cycle(d, f1, f2)) {
      REQUIRE(out.kind == ShortestOutcome::Kind::NegativeCycle);
      // The witness must be a closed negative walk over existing arcs.
      REQUIRE(out.cycle.size() >= 2);
      long long total = 0;
      for (std::size_t i = 0; i < out.cycle.size(); ++i) {
        const long long c = d.cost[out.cycle[i]][out.cycle[(i + 1) % out.cycle.size()]];
        REQUIRE(c < kBig);
        total += c;
      }
      CHECK(total < 0);
      ++cycles;
    } else {
      REQUIRE(out.kind == ShortestOutcome::Kind::Distance);
      CHECK(out.distance == oracle);
      ++distances;
    }
  }
  // The generator must exercise all three outcomes.
  CHECK(distances > 50);
  CHECK(cycles > 50);
  CHECK(unreachable > 20);
}

TEST_CASE("two-arc negative loop is reported with a witness") {
  DifferenceSystem sys(3, 0);
  sys.add_arc(0, 1, 0);
  sys.add_arc(1, 2, 1);
  sys.add_arc(2, 1, -2);
  const ShortestOutcome out = shortest_distance(sys, 0, 2);
  REQUIRE(out.kind == ShortestOutcome::Kind::NegativeCycle);
  std::vector<int> c = out.cycle;
  std::sort(c.begin(), c.end());
  CHECK(c == std::vector<int>{1, 2});
}

TEST_CASE("existence agrees with bounded exhaustive search") {
  std::mt19937 rng(23);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const DifferenceSystem sys = random_system(rng, n, 1 + static_cast<int>(rng() % 9));
    // Any satisfiable system has a solution within (n-1)*3 of the base node.
    bool any = false;
    for_all_assignments(n, 3 * (n - 1), [&](const std::vector<long long>& v) {
      any = any || satisfies(sys, v);
    });
    CHECK(exists_height(sys) == any);
    (any ? feasible : infeasible) += 1;
  }
  CHECK(feasible > 40);
  CHECK(infeasible > 40);
}

TEST_CASE("extremal heights dominate every assignment") {
  std::mt19937 rng(31);
  int tested = 0;
  while (tested < 60) {
    const int n = 2 + static_cast<int>(rng() % 3);
    DifferenceSystem sys = random_system(rng, n, 2 + static_cast<int>(rng() % 8));
    if (!exists_height(sys)) continue;
    std::vector<long long> hi, lo;
    try {
      hi = extremal_height(sys, 0, Extremal::Max);
      lo = extremal_height(sys, 0, Extremal::Min);
    } catch (const UnreachableFace&) {
      continue;  // some node unconstrained against the base
    }
    REQUIRE(satisfies(sys, hi));
    REQUIRE(satisfies(sys, lo));
    CHECK(hi[0] == 0);
    CHECK(lo[0] == 0);
    std::vector<long long> seen_hi(n, -kBig), seen_lo(n, kBig);
    for_all_assignments(n, 3 * (n - 1), [&](const std::vector<long long>& v) {
      if (!satisfies(sys, v)) return;
      for (int i = 0; i < n; ++i) {
        CHECK(v[i] <= hi[i]);
        CHECK(v[i] >= lo[i]);
        seen_hi[i] = std::max(seen_hi[i], v[i]);
        seen_lo[i] = std::min(seen_lo[i], v[i]);
      }
    });
    // Every bound is attained by some assignment, so hi/lo are tight.
    CHECK(seen_hi == hi);
    CHECK(seen_lo == lo);
    ++tested;
  }
}

TEST_CASE("face clusters are the pinned-difference classes") {
  DifferenceSystem sys(4, 0);
  sys.add_arc(0, 1, 2);
  sys.add_arc(1, 0, -2);  // pins v1 = v0 + 2
  sys.add_arc(1, 2, 1);
  sys.add_arc(2, 1, 0);  // slack: separate clusters
  sys.add_arc(0, 3, 0);
  sys.add_arc(3, 0, 0);  // pins v3 = v0
  const FaceClusterPartition part = face_clusters(sys);
  CHECK(part.cluster_count == 2);
  CHECK(part.same(0, 1));
  CHECK(part.same(0, 3));
  CHECK(!part.same(0, 2));
  CHECK(part.offset_in_cluster[1] - part.offset_in_cluster[0] == 2);
  CHECK(part.offset_in_cluster[3] - part.offset_in_cluster[0] == 0);
}

TEST_CASE("cluster relation matches tight round trips") {
  std::mt19937 rng(41);
  int done = 0;
  while (done < 60) {
    const int n = 3 + static_cast<int>(rng() % 3);
    DifferenceSystem sys = random_system(rng, n, 2 + static_cast<int>(rng() % 10));
    if (!exists_height(sys)) continue;
    const FaceClusterPartition part = face_clusters(sys);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const ShortestOutcome ab = shortest_distance(sys, a, b);
        const ShortestOutcome ba = shortest_distance(sys, b, a);
        const bool tight = ab.kind == ShortestOutcome::Kind::Distance &&
                           ba.kind == ShortestOutcome::Kind::Distance &&
                           ab.distance == -ba.distance;
        CHECK(part.same(a, b) == tight);
        if (tight) {
          CHECK(part.offset_in_cluster[b] - part.offset_in_cluster[a] == ab.distance);
        }
      }
    }
    ++done;
  }
}

TEST_CASE("height connection walks valid states in l1 steps") {
  std::mt19937 rng(53);
  int connected = 0, refused = 0;
  while (connected < 60 || refused < 10) {
    const int n = 3 + static_cast<int>(rng() % 3);
    DifferenceSystem sys = random_system(rng, n, 2 + static_cast<int>(rng() % 10));
    if (!exists_height(sys)) continue;
    std::vector<long long> hi, lo;
    try {
      hi = extremal_height(sys, 0, Extremal::Max);
      lo = extremal_height(sys, 0, Extremal::Min);
    } catch (const UnreachableFace&) {
      continue;
    }

    // hi - lo is constant on every pinned cluster; single +-1 moves can bridge
    // the two assignments exactly when that constant vanishes on each cluster
    // of two or more nodes.
    const FaceClusterPartition part = face_clusters(sys);
    std::vector<int> members(part.cluster_count, 0);
    std::vector<long long> shift(part.cluster_count, 0);
    bool bridgeable = true;
    for (int v = 0; v < n; ++v) {
      const int c = part.cluster_of[v];
      if (members[c]++ == 0) {
        shift[c] = hi[v] - lo[v];
      } else {
        CHECK(hi[v] - lo[v] == shift[c]);
        if (shift[c] != 0) bridgeable = false;
      }
    }

    if (!bridgeable) {
      CHECK_THROWS_AS(connect_heights(sys, hi, lo), DifferentComponent);
      ++refused;
      continue;
    }
    long long l1 = 0;
    for (int i = 0; i < n; ++i) l1 += std::llabs(hi[i] - lo[i]);
    const auto moves = connect_heights(sys, hi, lo);
    CHECK(static_cast<long long>(moves.size()) == l1);
    std::vector<long long> cur = hi;
    for (const HeightMove& m : moves) {
      CHECK((m.delta == 1 || m.delta == -1));
      cur[m.node] += m.delta;
      REQUIRE(satisfies(sys, cur));
    }
    CHECK(cur == lo);
    CHECK(connect_heights(sys, lo, lo).empty());
    ++connected;
  }
  CHECK(connected >= 60);
  CHECK(refused >= 10);
}

TEST_CASE("pinned clusters that disagree are not connectable") {
  DifferenceSystem sys(3, 0);
  sys.pin_difference(1, 2, 0);
  sys.add_arc(0, 1, 5);
  sys.add_arc(1, 0, 5);
  const std::vector<long long> t1{0, 0, 0};
  const std::vector<long long> t2{0, 3, 3};
  CHECK_THROWS_AS(connect_heights(sys, t1, t2), DifferentComponent);
}
