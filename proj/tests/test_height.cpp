#include "gridham/height.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "gridham/cover.hpp"
#include "gridham/grid.hpp"

using namespace gridham;

namespace {

EdgeId eid(const GridGraph& g, Point a, Point b) {
  const auto e = g.edge_between(a, b);
  REQUIRE(e.has_value());
  return *e;
}

std::vector<char> cover_of(const GridGraph& g, const std::vector<std::vector<Point>>& cycles) {
  std::vector<char> in(g.edge_count(), 0);
  for (const auto& cyc : cycles) {
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      in[eid(g, cyc[i], cyc[(i + 1) % cyc.size()])] = 1;
    }
  }
  return in;
}

std::vector<long long> tau_field(const HeightState& s) {
  std::vector<long long> out;
  for (FaceId f = 0; f < static_cast<FaceId>(s.graph().faces().size()); ++f) {
    out.push_back(s.tau(f));
  }
  return out;
}

// Random extremal Z-moves, for shaking a state into varied covers.
void random_walk(HeightState& s, int steps, unsigned seed) {
  std::mt19937 rng(seed);
  for (int i = 0; i < steps; ++i) {
    const auto [maxs, mins] = s.local_extrema();
    std::vector<FaceId> all = maxs;
    all.insert(all.end(), mins.begin(), mins.end());
    REQUIRE(!all.empty());
    s.z_transform(all[rng() % all.size()]);
  }
}

}  // namespace

TEST_CASE("unit square heights") {
  GridGraph g = GridGraph::parse("##\n##");
  HeightState s(*find_initial_cover(g));
  const FaceId sq = g.squares()[0];
  CHECK(s.p() == 1);
  CHECK(s.tau(sq) == -1);
  CHECK(s.tau(g.outer_face()) == 0);

  // Across values are the outer boundary values: 0 on the black-corner
  // sides, -2 on the white-corner sides.
  std::vector<long long> around{s.across(sq, Dir::E), s.across(sq, Dir::N),
                                s.across(sq, Dir::W), s.across(sq, Dir::S)};
  std::sort(around.begin(), around.end());
  CHECK(around == std::vector<long long>{-2, -2, 0, 0});

  CHECK(!s.local_max(sq));
  CHECK(!s.local_min(sq));
  CHECK_THROWS_AS(s.z_transform(sq), NotExtremal);
  CHECK_THROWS_AS(s.row_from(sq, RowKind::Maximal), RowInvalidated);
  CHECK_THROWS_AS(s.row_from(sq, RowKind::Minimal), RowInvalidated);
  CHECK(s.signature().empty());
  s.check_consistency();
}

TEST_CASE("two tall cycles: field, extrema, join") {
  GridGraph g = GridGraph::parse("####\n####\n####");
  const std::vector<Point> left{{0, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}, {0, 1}};
  const std::vector<Point> right{{2, 0}, {3, 0}, {3, 1}, {3, 2}, {2, 2}, {2, 1}};
  HeightState s(CycleCover(g, cover_of(g, {left, right})));
  CHECK(s.p() == 2);

  const long long want[2][3] = {{-1, -2, -1}, {-2, -1, -2}};  // [y][x]
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) CHECK(s.tau(g.square_at(Cell{x, y})) == want[y][x]);
  }
  const auto [maxs, mins] = s.local_extrema();
  CHECK(maxs == std::vector<FaceId>{g.square_at(Cell{1, 1})});
  CHECK(mins == std::vector<FaceId>{g.square_at(Cell{1, 0})});
  CHECK(s.corner_label_count(g.square_at(Cell{1, 0})) == 2);
  CHECK(s.corner_label_count(g.square_at(Cell{0, 0})) == 1);

  // Raising the minimum joins the two cycles into the tour of the region.
  s.z_transform(g.square_at(Cell{1, 0}));
  CHECK(s.p() == 1);
  CHECK(s.tau(g.square_at(Cell{1, 0})) == 0);
  const std::vector<Point> tour{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}, {3, 2},
                                {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}, {0, 1}};
  CHECK(s.cover_edges() == cover_of(g, {tour}));
  s.check_consistency();
}

TEST_CASE("length-one rows behave like single Z-moves") {
  GridGraph g = GridGraph::parse("####\n####\n####");
  const std::vector<Point> left{{0, 0}, {1, 0}, {1, 1}, {1, 2}, {0, 2}, {0, 1}};
  const std::vector<Point> right{{2, 0}, {3, 0}, {3, 1}, {3, 2}, {2, 2}, {2, 1}};
  HeightState s(CycleCover(g, cover_of(g, {left, right})));

  const RowResult r = s.row_from(g.square_at(Cell{1, 1}), RowKind::Maximal);
  REQUIRE(!r.stuck);
  CHECK(r.row.length == 1);
  CHECK(r.row.squares == std::vector<FaceId>{g.square_at(Cell{1, 1})});

  HeightState by_z = s;
  by_z.z_transform(g.square_at(Cell{1, 1}));
  s.move_row(r.row);
  CHECK(s.cover_edges() == by_z.cover_edges());
  CHECK(tau_field(s) == tau_field(by_z));
  CHECK(s.p() == by_z.p());
}

TEST_CASE("small corner cycle: field and involution") {
  GridGraph g = GridGraph::parse("####\n####\n####\n####");
  const std::vector<Point> small{{0, 2}, {1, 2}, {1, 3}, {0, 3}};
  const std::vector<Point> big{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}, {3, 2},
                               {3, 3}, {2, 3}, {2, 2}, {2, 1}, {1, 1}, {0, 1}};
  HeightState s(CycleCover(g, cover_of(g, {small, big})));
  CHECK(s.p() == 2);

  const long long want[3][3] = {{-1, 0, -1}, {0, -1, -2}, {-1, -2, -1}};  // [y][x]
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) CHECK(s.tau(g.square_at(Cell{x, y})) == want[y][x]);
  }
  // Squares enumerate top row first, so the y = 1 hits precede the y = 0 one.
  const auto [maxs, mins] = s.local_extrema();
  CHECK(maxs == std::vector<FaceId>{g.square_at(Cell{0, 1}), g.square_at(Cell{1, 0})});
  CHECK(mins == std::vector<FaceId>{g.square_at(Cell{1, 2}), g.square_at(Cell{2, 1})});

  const std::vector<char> before = s.cover_edges();
  const std::vector<long long> taus = tau_field(s);
  s.z_transform(g.square_at(Cell{1, 2}));  // joins the two cycles
  CHECK(s.p() == 1);
  s.z_transform(g.square_at(Cell{1, 2}));  // now a maximum; splits them back
  CHECK(s.p() == 2);
  CHECK(s.cover_edges() == before);
  CHECK(tau_field(s) == taus);
  s.check_consistency();
}

TEST_CASE("wrapped cycle: critical rows walk and move") {
  GridGraph g = GridGraph::parse("######\n######\n######\n######\n######");
  const std::vector<Point> band{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0},
                                {5, 1}, {4, 1}, {3, 1}, {2, 1}, {1, 1}, {0, 1}};
  const std::vector<Point> wrap{{0, 2}, {0, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4},
                                {4, 4}, {5, 4}, {5, 3}, {5, 2}, {4, 2}, {4, 3},
                                {3, 3}, {3, 2}, {2, 2}, {2, 3}, {1, 3}, {1, 2}};
  HeightState s(CycleCover(g, cover_of(g, {band, wrap})));
  CHECK(s.p() == 2);

  const FaceId f = g.square_at(Cell{1, 1});
  CHECK(s.corner_label_count(f) == 2);
  // The one odd neighbor of this square lies across its out-of-cover edge.
  CHECK(s.across(f, Dir::S) == s.tau(f) + 1);
  CHECK(s.across(f, Dir::E) == s.tau(f) + 1);
  CHECK(s.across(f, Dir::W) == s.tau(f) + 1);
  CHECK(s.across(f, Dir::N) == s.tau(f) - 1);

  CHECK_THROWS_AS(s.row_from(f, RowKind::Maximal), RowInvalidated);
  const RowResult r = s.row_from(f, RowKind::Minimal);
  REQUIRE(!r.stuck);
  CHECK(r.row.dir == Dir::N);
  CHECK(r.row.squares == std::vector<FaceId>{f, g.square_at(Cell{1, 2}), g.square_at(Cell{1, 3})});
  CHECK(r.stop_face == g.outer_face());

  // Raising the full row joins everything: the region becomes one tour.
  const std::vector<long long> taus = tau_field(s);
  s.move_row(r.row);
  CHECK(s.p() == 1);
  for (FaceId q : r.row.squares) CHECK(s.tau(q) == taus[q] + 2);
  s.check_consistency();
}

TEST_CASE("ring region: no squares, hole signature") {
  GridGraph g = GridGraph::parse("####\n#..#\n#..#\n####");
  REQUIRE(g.hole_count() == 1);
  CHECK(g.hole_defect(0) == 0);
  const auto cover = find_initial_cover(g);
  REQUIRE(cover.has_value());
  CHECK(cover->p() == 1);
  HeightState s(*cover);
  CHECK(s.local_extrema().first.empty());
  CHECK(s.local_extrema().second.empty());
  CHECK(s.signature() == std::vector<long long>{-1});
  CHECK(signature_of(*cover) == std::vector<long long>{-1});
  s.check_consistency();
}

TEST_CASE("punctured block: Z-walk keeps the signature and consistency") {
  GridGraph g = GridGraph::parse("#####\n#####\n##.##\n#####\n#####");
  REQUIRE(g.hole_count() == 1);
  // Four degree-3 white rim vertices contribute -1 each: heights around this
  // hole are genuinely multivalued, winding by -4 per turn. The outer walk
  // picks up the opposite defect.
  CHECK(g.hole_defect(0) == -4);
  CHECK(g.boundary_defect() == 4);
  const auto cover = find_initial_cover(g);
  REQUIRE(cover.has_value());
  HeightState s(*cover);
  const std::vector<long long> sig = s.signature();
  REQUIRE(sig.size() == 1);

  std::mt19937 rng(97);
  for (int i = 0; i < 60; ++i) {
    const auto [maxs, mins] = s.local_extrema();
    std::vector<FaceId> all = maxs;
    all.insert(all.end(), mins.begin(), mins.end());
    REQUIRE(!all.empty());
    const int before = s.p();
    s.z_transform(all[rng() % all.size()]);
    CHECK(std::abs(s.p() - before) == 1);
    CHECK(s.signature() == sig);
    if (i % 10 == 9) s.check_consistency();
  }
  s.check_consistency();
}

TEST_CASE("row moves reverse cleanly") {
  GridGraph g = GridGraph::parse("######\n######\n######");
  const auto cover = find_initial_cover(g);
  REQUIRE(cover.has_value());
  HeightState s(*cover);

  int roundtrips = 0;
  for (unsigned seed = 1; seed <= 6; ++seed) {
    random_walk(s, 15, seed);
    for (FaceId f : g.squares()) {
      for (RowKind kind : {RowKind::Maximal, RowKind::Minimal}) {
        RowResult r;
        try {
          r = s.row_from(f, kind);
        } catch (const RowInvalidated&) {
          continue;
        }
        if (r.stuck) continue;

        HeightState moved = s;
        const int p0 = moved.p();
        moved.move_row(r.row);
        moved.check_consistency();
        // Each of the length Z-moves shifts p by one.
        CHECK((moved.p() - p0 - r.row.length) % 2 == 0);
        CHECK(std::abs(moved.p() - p0) <= r.row.length);

        // Where the reversed row exists, moving it back must restore
        // everything.
        const RowKind back_kind =
            r.row.kind == RowKind::Maximal ? RowKind::Minimal : RowKind::Maximal;
        RowResult back;
        try {
          back = moved.row_from(r.row.squares.back(), back_kind);
        } catch (const RowInvalidated&) {
          continue;
        }
        std::vector<FaceId> reversed(r.row.squares.rbegin(), r.row.squares.rend());
        if (back.stuck || back.row.squares != reversed) continue;
        moved.move_row(back.row);
        CHECK(moved.cover_edges() == s.cover_edges());
        CHECK(tau_field(moved) == tau_field(s));
        CHECK(moved.p() == s.p());
        ++roundtrips;
      }
    }
  }
  CHECK(roundtrips >= 10);
}

TEST_CASE("rebuilding from the cover preserves the state") {
  GridGraph g = GridGraph::parse("####\n####\n####\n####");
  const auto cover = find_initial_cover(g);
  REQUIRE(cover.has_value());
  HeightState s(*cover);
  random_walk(s, 25, 5);

  const CycleCover extracted = s.cover();
  CHECK(extracted.p() == s.p());
  HeightState rebuilt = height_of(extracted);
  CHECK(rebuilt.cover_edges() == s.cover_edges());
  CHECK(tau_field(rebuilt) == tau_field(s));
  CHECK(rebuilt.p() == s.p());
}
