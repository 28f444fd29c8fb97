#pragma once

#include <map>

#include <boost/rational.hpp>

#include "gridham/grid.hpp"

namespace gridham {

using Rat = boost::rational<long long>;

// Sparse chains with exact rational coefficients. Chain1 stores one
// coefficient per undirected edge, interpreted on the black-to-white
// orientation; reading the reversed orientation negates it.
template <typename Key>
class SparseChain {
 public:
  const Rat& get(Key k) const {
    static const Rat zero{0};
    auto it = c_.find(k);
    return it == c_.end() ? zero : it->second;
  }
  void set(Key k, Rat v) {
    if (v == Rat{0}) {
      c_.erase(k);
    } else {
      c_[k] = v;
    }
  }
  void add(Key k, Rat v) { set(k, get(k) + v); }
  bool zero() const { return c_.empty(); }
  const std::map<Key, Rat>& terms() const { return c_; }

  friend SparseChain operator+(SparseChain a, const SparseChain& b) {
    for (const auto& [k, v] : b.c_) a.add(k, v);
    return a;
  }
  friend SparseChain operator-(SparseChain a, const SparseChain& b) {
    for (const auto& [k, v] : b.c_) a.add(k, -v);
    return a;
  }
  friend SparseChain operator*(Rat s, SparseChain a) {
    if (s == Rat{0}) return SparseChain{};
    for (auto& [k, v] : a.c_) v *= s;
    return a;
  }
  friend bool operator==(const SparseChain&, const SparseChain&) = default;

 private:
  std::map<Key, Rat> c_;
};

using Chain0 = SparseChain<VertexId>;
using Chain1 = SparseChain<EdgeId>;
using Chain2 = SparseChain<FaceId>;

// Dart coefficient: +c if the dart runs black to white, -c otherwise.
Rat dart_coefficient(const GridGraph& g, const Chain1& c, DartId d);

// d(e) = head - tail, extended linearly.
Chain0 boundary1(const GridGraph& g, const Chain1& c);
// d(f) = sum of f's clockwise boundary edges, extended linearly.
Chain1 boundary2(const GridGraph& g, const Chain2& c);

// 2 - |F| + |E| - |V|; zero for every connected plane graph.
int homology_dimension(const GridGraph& g);

inline int eps_of(VertexColor c) { return c == VertexColor::Black ? 1 : -1; }

}  // namespace gridham
