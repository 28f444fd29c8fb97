#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace gridham {

// Integer lattice point. y grows upward; mask row 0 is the top row.
struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

// Unit cell whose corners are (x,y), (x+1,y), (x+1,y+1), (x,y+1).
struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Directions in counterclockwise rotation order. This is the rotation system:
// edges around a vertex are ordered E, N, W, S.
enum class Dir : int { E = 0, N = 1, W = 2, S = 3 };

inline constexpr int kDirCount = 4;

inline constexpr int dx(Dir d) {
  constexpr int v[4] = {1, 0, -1, 0};
  return v[static_cast<int>(d)];
}
inline constexpr int dy(Dir d) {
  constexpr int v[4] = {0, 1, 0, -1};
  return v[static_cast<int>(d)];
}
inline constexpr Dir opposite(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 2) % 4); }
inline Point step(Point p, Dir d) { return Point{p.x + dx(d), p.y + dy(d)}; }

// Bipartite classes: a vertex is black iff x+y is even.
inline bool is_black(Point p) { return ((p.x + p.y) & 1) == 0; }

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept {
    std::uint64_t v = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                      static_cast<std::uint32_t>(p.y);
    v ^= v >> 33;
    v *= 0xff51afd7ed558ccdULL;
    v ^= v >> 33;
    return static_cast<std::size_t>(v);
  }
};

}  // namespace gridham
