#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "gridham/grid.hpp"

namespace gridham {

// System of difference restrictions value(to) - value(from) <= cost over a
// node set (faces, in every use here). Negative arc costs are legal; an
// infeasible system shows up as a negative-cost cycle.
class DifferenceSystem {
 public:
  struct Arc {
    int from = -1;
    int to = -1;
    long long cost = 0;
  };

  DifferenceSystem(int node_count, int reference)
      : nodes_(node_count), reference_(reference), head_(node_count, -1) {}

  void add_arc(int from, int to, long long cost) {
    arcs_.push_back(Arc{from, to, cost});
    next_.push_back(head_[from]);
    head_[from] = static_cast<int>(arcs_.size()) - 1;
  }
  // Force value(to) - value(from) == delta.
  void pin_difference(int from, int to, long long delta) {
    add_arc(from, to, delta);
    add_arc(to, from, -delta);
  }

  int node_count() const { return nodes_; }
  int reference() const { return reference_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  // Iterate arcs leaving `from` in insertion order.
  void for_each_arc_from(int from, const std::function<void(const Arc&)>& fn) const;

 private:
  int nodes_;
  int reference_;
  std::vector<Arc> arcs_;
  std::vector<int> head_;  // per node: most recent outgoing arc
  std::vector<int> next_;  // per arc: previous outgoing arc of the same node

  friend class ArcScanner;
};

struct InfeasibleSystem : std::runtime_error {
  InfeasibleSystem() : std::runtime_error("difference system has a negative cycle") {}
};
struct UnreachableFace : std::runtime_error {
  UnreachableFace() : std::runtime_error("no dual path between the faces") {}
};
struct DifferentComponent : std::runtime_error {
  DifferentComponent()
      : std::runtime_error("height fields differ on a pinned cluster; not connectable") {}
};

struct ShortestOutcome {
  enum class Kind { Distance, Unreachable, NegativeCycle };
  Kind kind = Kind::Unreachable;
  long long distance = 0;
  std::vector<int> cycle;  // witness node cycle when kind == NegativeCycle
};

// Minimum total arc cost over paths f1 -> f2; label-correcting relaxation
// with negative-cycle detection. A negative cycle is reported only when it
// can contaminate the f1 -> f2 distance.
ShortestOutcome shortest_distance(const DifferenceSystem& sys, int f1, int f2);

// True iff some assignment satisfies every restriction, i.e. no negative
// cycle anywhere.
bool exists_height(const DifferenceSystem& sys);

enum class Extremal { Max, Min };

// The pointwise maximal (minimal) satisfying assignment normalized to
// value(reference) = 0: Max gives D(f0, f), Min gives -D(f, f0).
// Throws InfeasibleSystem on a negative cycle, UnreachableFace if some node
// is not constrained against the reference.
std::vector<long long> extremal_height(const DifferenceSystem& sys, int f0, Extremal dir);

struct FaceClusterPartition {
  std::vector<int> cluster_of;  // node -> cluster index (0-based, dense)
  int cluster_count = 0;
  // Pinned offset against the cluster's representative (the lowest node id):
  // value(node) - value(rep) is this constant in every valid assignment.
  std::vector<long long> offset_in_cluster;

  bool same(int a, int b) const { return cluster_of[a] == cluster_of[b]; }
};

// Equivalence classes of the zero-slack relation D(f1,f2) = -D(f2,f1).
// Throws InfeasibleSystem.
FaceClusterPartition face_clusters(const DifferenceSystem& sys);

struct HeightMove {
  int node = -1;
  int delta = 0;  // +1 or -1
};

// Unit-step walk from tau1 to tau2 through valid assignments, chasing
// blocked moves along tight arcs. Length equals the l1 distance. Throws
// DifferentComponent when the fields disagree on a pinned cluster.
std::vector<HeightMove> connect_heights(const DifferenceSystem& sys,
                                        std::vector<long long> tau1,
                                        const std::vector<long long>& tau2);

enum class EdgeStatus { Free, FixedIn, FixedOut };

// Per-edge membership status across every degree-phi spanning subgraph:
// Free iff the two incident faces lie in distinct face clusters of the
// canonical difference system. Defined in cover.cpp (needs a base subgraph).
struct EmptySpace : std::runtime_error {
  EmptySpace() : std::runtime_error("no spanning subgraph meets the degree demands") {}
};
std::vector<EdgeStatus> classify_edges(const GridGraph& g, const std::vector<int>& phi);

}  // namespace gridham
