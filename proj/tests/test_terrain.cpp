#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "rbindex/terrain.hpp"
#include "rbindex/terrain_distance.hpp"
#include "rbindex/terrain_naive.hpp"
#include "terrain_testgen.hpp"

using namespace rbindex;

namespace {

Terrain flat_square(long z) {
  Terrain t;
  t.domain = {rat(0), rat(0), rat(4), rat(4)};
  t.vertices = {{rat(0), rat(0), rat(z)},
                {rat(4), rat(0), rat(z)},
                {rat(4), rat(4), rat(z)},
                {rat(0), rat(4), rat(z)}};
  t.triangles = {{0, 1, 2}, {0, 2, 3}};
  return t;
}

Terrain tent(long apex_z) {
  Terrain t;
  t.domain = {rat(0), rat(0), rat(4), rat(4)};
  t.vertices = {{rat(0), rat(0), rat(0)},
                {rat(4), rat(0), rat(0)},
                {rat(4), rat(4), rat(0)},
                {rat(0), rat(4), rat(0)},
                {rat(2), rat(2), rat(apex_z)}};
  t.triangles = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  return t;
}

ConvexTerrain one_plane(long a, long b, long c, long size = 4) {
  ConvexTerrain t;
  t.domain = {rat(0), rat(0), rat(size), rat(size)};
  t.planes = {{rat(a), rat(b), rat(c)}};
  return t;
}

}  // namespace

TEST_CASE("height of a single plane") {
  auto b = one_plane(0, 0, 5);
  CHECK(height_at(b, {rat(1), rat(1)}) == rat(5));
  CHECK(height_at(b, {rat(0), rat(4)}) == rat(5));
  CHECK_THROWS_AS(height_at(b, {rat(5), rat(0)}), OutOfDomain);
}

TEST_CASE("height of an envelope is the max over planes") {
  ConvexTerrain b;
  b.domain = {rat(-4), rat(-4), rat(4), rat(4)};
  b.planes = {{rat(1), rat(0), rat(0)}, {rat(-1), rat(0), rat(0)}};  // z = x, z = -x
  CHECK(height_at(b, {rat(2), rat(0)}) == rat(2));
  CHECK(height_at(b, {rat(-3), rat(1)}) == rat(3));
  CHECK(height_at(b, {rat(0), rat(0)}) == rat(0));
}

TEST_CASE("height inside a triangle by barycentric interpolation") {
  Terrain t;
  t.domain = {rat(0), rat(0), rat(4), rat(4)};
  t.vertices = {{rat(0), rat(0), rat(0)}, {rat(4), rat(0), rat(0)}, {rat(0), rat(4), rat(4)}};
  t.triangles = {{0, 1, 2}};
  CHECK(height_at(t, {rat(1), rat(1)}) == rat(1));
}

TEST_CASE("terrain validation accepts the ladder generator and flags damage") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Terrain t = testgen::random_terrain(rng, 3 + trial, 2 + trial);
    CHECK(validate_terrain(t).ok());
  }
  Terrain broken = flat_square(0);
  broken.triangles.pop_back();
  auto rep = validate_terrain(broken);
  REQUIRE(!rep.ok());
  bool covering = false, open_edge = false;
  for (const auto& v : rep.violations) {
    covering = covering || v.code == "not-covering";
    open_edge = open_edge || v.code == "open-edge";
  }
  CHECK(covering);
  CHECK(open_edge);
}

TEST_CASE("flat square vs constant plane") {
  auto r = flat_square(0);
  auto b = one_plane(0, 0, 5);
  auto mx = max_vertical_distance(r, b);
  CHECK(mx.value == rat(5));
  CHECK(mx.kind == VDistCase::VertexFacet);
  auto mn = min_vertical_distance(r, b);
  CHECK(mn.value == rat(5));
}

TEST_CASE("tent against the ground plane") {
  auto r = tent(3);
  auto b = one_plane(0, 0, 0);
  auto mx = max_vertical_distance(r, b);
  CHECK(mx.value == rat(3));
  CHECK(mx.witness_xy == Point{rat(2), rat(2)});
}

TEST_CASE("intersecting surfaces have zero minimum distance") {
  auto r = tent(3);
  auto b = one_plane(0, 0, 1);  // cuts through the tent
  auto mn = min_vertical_distance(r, b);
  CHECK(mn.value == rat(0));
  CHECK(height_at(r, mn.witness_xy) == height_at(b, mn.witness_xy));
  auto nv = naive_terrain_distance(r, b, VDistMode::Min);
  CHECK(nv.value == rat(0));
}

TEST_CASE("envelope edges carry both planes' dominance region") {
  ConvexTerrain b;
  b.domain = {rat(-4), rat(-4), rat(4), rat(4)};
  b.planes = {{rat(0), rat(1), rat(0)}, {rat(0), rat(-1), rat(0)}};  // z = y, z = -y
  ValidationReport rep;
  auto edges = envelope_edges(b, rep);
  CHECK(rep.ok());
  REQUIRE(edges.size() == 1);
  // The fold line y = 0, truncated outside the domain.
  CHECK(edges[0].a.y == rat(0));
  CHECK(edges[0].b.y == rat(0));
  CHECK(edges[0].a.x < rat(-4));
  CHECK(edges[0].b.x > rat(4));
}

TEST_CASE("domain mismatch is rejected") {
  auto r = flat_square(0);
  auto b = one_plane(0, 0, 5, 8);
  CHECK_THROWS_AS(max_vertical_distance(r, b), InvalidInput);
}

TEST_CASE("random instances: fast equals naive exactly, max and min") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 40; ++trial) {
    auto [r, b] = testgen::random_instance(rng, 17, 9);
    REQUIRE(validate_terrain(r).ok());

    auto fast_max = max_vertical_distance(r, b);
    auto naive_max = naive_terrain_distance(r, b, VDistMode::Max);
    CHECK(fast_max.value == naive_max.value);
    CHECK(abs(height_at(r, fast_max.witness_xy) - height_at(b, fast_max.witness_xy)) ==
          fast_max.value);

    auto fast_min = min_vertical_distance(r, b);
    auto naive_min = naive_terrain_distance(r, b, VDistMode::Min);
    CHECK(fast_min.value == naive_min.value);
    CHECK(abs(height_at(r, fast_min.witness_xy) - height_at(b, fast_min.witness_xy)) ==
          fast_min.value);

    // Dominance sampling: no point beats the max, none undercuts the min.
    std::uniform_int_distribution<long> dx(0, 40 * 8), dy(0, 24 * 8);
    for (int s = 0; s < 200; ++s) {
      Point p{rat(dx(rng), 8), rat(dy(rng), 8)};
      Rational d = abs(height_at(r, p) - height_at(b, p));
      CHECK(d <= fast_max.value);
      CHECK(d >= fast_min.value);
    }
  }
}

TEST_CASE("concavity of the difference along red edges") {
  // Along any red edge the signed difference is concave: midpoint value at
  // least the average of its neighbours on a uniform grid.
  std::mt19937_64 rng(5);
  Terrain r = testgen::random_terrain(rng, 4, 4);
  ConvexTerrain b = testgen::random_convex_terrain(rng, 5);
  ProjectedPair pp = build_projected_pair(r, b);
  REQUIRE(pp.issues.ok());
  for (std::size_t k = 0; k < pp.pair.reds.size(); ++k) {
    const Segment& red = pp.pair.reds[k];
    const RedEdgeInfo& info = pp.red_info[k];
    auto d_at = [&](const Rational& x) -> Rational {
      Rational y = y_at_x(red, x);
      Rational z_red = info.z_a + (info.z_b - info.z_a) * (x - red.a.x) / (red.b.x - red.a.x);
      return z_red - height_at(b, {x, y});
    };
    const int steps = 16;
    for (int s = 1; s + 1 < steps; ++s) {
      Rational x0 = red.a.x + (red.b.x - red.a.x) * (s - 1) / steps;
      Rational x1 = red.a.x + (red.b.x - red.a.x) * s / steps;
      Rational x2 = red.a.x + (red.b.x - red.a.x) * (s + 1) / steps;
      CHECK(d_at(x1) * 2 >= d_at(x0) + d_at(x2));
    }
  }
}

TEST_CASE("terrain files round trip") {
  std::string rt =
      "domain 0 0 4 4\n"
      "v 0 0 0\nv 4 0 0\nv 4 4 0\nv 0 4 0\nv 2 2 3\n"
      "f 1 2 5\nf 2 3 5\nf 3 4 5\nf 4 1 5\n";
  std::istringstream rin(rt);
  Terrain r = load_terrain(rin);
  CHECK(validate_terrain(r).ok());
  CHECK(r.vertices.size() == 5);
  CHECK(r.triangles.size() == 4);

  std::string bt = "domain 0 0 4 4\np 0 0 5\np 1/2 -1 3\n";
  std::istringstream bin(bt);
  ConvexTerrain b = load_planes(bin);
  CHECK(b.planes.size() == 2);
  CHECK(b.planes[1].a == rat(1, 2));

  std::istringstream bad("p 1 2 3\n");
  CHECK_THROWS_AS(load_planes(bad), ParseError);
}
