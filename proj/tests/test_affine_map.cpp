#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "mdimlab/affine_map.hpp"
#include "oracles.hpp"

using namespace mdimlab;

TEST_CASE("tent3 structure and values") {
  PiecewiseAffineMap g = tent3();
  REQUIRE(g.lap_count() == 3);
  CHECK(g.branches()[0].slope == 3.0);
  CHECK(g.branches()[1].slope == -3.0);
  CHECK(g.branches()[2].slope == 3.0);

  CHECK(g.eval(0.0) == 0.0);
  CHECK(g.eval(1.0 / 3.0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(g.eval(0.5) == Catch::Approx(0.5).margin(1e-15));
  CHECK(g.eval(2.0 / 3.0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(g.eval(1.0) == Catch::Approx(1.0).margin(1e-15));

  // formula cross-check on a grid
  for (int i = 0; i <= 100; ++i) {
    double x = i / 100.0;
    CHECK(g.eval(x) ==
          Catch::Approx(std::abs(1.0 - std::abs(3.0 * x - 1.0))).margin(1e-12));
  }
  CHECK(g.is_self_map());
  CHECK_THROWS_AS(g.eval(1.5), DomainError);
  CHECK_THROWS_AS(g.eval(-0.2), DomainError);
}

TEST_CASE("branch lookup: left branch wins at shared endpoints") {
  PiecewiseAffineMap g = tent3();
  const AffineBranch& b = g.branch_at(1.0 / 3.0);
  CHECK(b.lo == 0.0);  // left of the two agreeing branches
  CHECK(g.eval(1.0 / 3.0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("compose_power of tent3") {
  PiecewiseAffineMap g = tent3();

  SECTION("power 1 returns the map unchanged") {
    PiecewiseAffineMap g1 = compose_power(g, 1);
    REQUIRE(g1.lap_count() == 3);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(g1.branches()[i].slope == g.branches()[i].slope);
  }

  SECTION("power 2: 9 laps of slope +-9, against the sampling oracle") {
    PiecewiseAffineMap g2 = compose_power(g, 2);
    REQUIRE(g2.lap_count() == 9);
    for (const auto& b : g2.branches()) CHECK(std::abs(b.slope) == 9.0);

    auto scan = oracles::lap_scan([&](double x) { return g.eval(g.eval(x)); },
                                  0.0, 1.0, 9 * 16);
    CHECK(scan.laps == 9);
    CHECK(scan.max_abs_slope == Catch::Approx(9.0).margin(1e-6));
    CHECK(scan.min_abs_slope == Catch::Approx(9.0).margin(1e-6));

    // pointwise agreement with double evaluation
    for (int i = 0; i <= 1000; ++i) {
      double x = i / 1000.0;
      CHECK(g2.eval(x) == Catch::Approx(g.eval(g.eval(x))).margin(1e-12));
    }
  }

  SECTION("power 3 has 27 laps") {
    CHECK(compose_power(g, 3).lap_count() == 27);
  }

  SECTION("powers compose additively") {
    PiecewiseAffineMap g5 = compose_power(g, 5);
    PiecewiseAffineMap g23 = compose(compose_power(g, 2), compose_power(g, 3));
    for (int i = 0; i <= 1000; ++i) {
      double x = i / 1000.0;
      CHECK(g5.eval(x) == Catch::Approx(g23.eval(x)).margin(1e-9));
    }
    // iterated power of a power
    PiecewiseAffineMap g4 = compose_power(compose_power(g, 2), 2);
    for (int i = 0; i <= 1000; ++i) {
      double x = i / 1000.0;
      CHECK(g4.eval(x) == Catch::Approx(g.iterate(x, 4)).margin(1e-9));
    }
  }

  SECTION("branch cap raises a resource error") {
    CHECK_THROWS_AS(compose_power(g, 20, 1000), ResourceError);
  }
}

TEST_CASE("fixed points by bisection") {
  auto roots = fixed_points(tent3());
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == Catch::Approx(0.0).margin(1e-11));
  CHECK(roots[1] == Catch::Approx(0.5).margin(1e-11));
  CHECK(roots[2] == Catch::Approx(1.0).margin(1e-11));
}

TEST_CASE("exact sup distance between maps") {
  PiecewiseAffineMap g = tent3();
  PiecewiseAffineMap id = PiecewiseAffineMap::identity(0.0, 1.0);
  CHECK(sup_distance(g, id) == Catch::Approx(2.0 / 3.0).margin(1e-14));
  CHECK(sup_distance(g, g) == 0.0);
}

TEST_CASE("image of an interval") {
  PiecewiseAffineMap g = tent3();
  auto full = g.image_of(0.0, 1.0 / 3.0);
  REQUIRE(full.size() == 1);
  CHECK(full[0].first == Catch::Approx(0.0).margin(1e-15));
  CHECK(full[0].second == Catch::Approx(1.0).margin(1e-15));

  auto part = g.image_of(0.1, 0.2);
  REQUIRE(part.size() == 1);
  CHECK(part[0].first == Catch::Approx(0.3).margin(1e-15));
  CHECK(part[0].second == Catch::Approx(0.6).margin(1e-15));
}

TEST_CASE("constructor rejects malformed maps") {
  // discontinuity at the breakpoint
  CHECK_THROWS_AS(PiecewiseAffineMap(0.0, 1.0,
                                     {AffineBranch{0.0, 0.5, 1.0, 0.0},
                                      AffineBranch{0.5, 1.0, 1.0, 0.3}}),
                  PreconditionError);
  // gap between branch domains
  CHECK_THROWS_AS(PiecewiseAffineMap(0.0, 1.0,
                                     {AffineBranch{0.0, 0.4, 1.0, 0.0},
                                      AffineBranch{0.6, 1.0, 1.0, 0.0}}),
                  PreconditionError);
  // image escapes the ambient interval
  CHECK_THROWS_AS(PiecewiseAffineMap(0.0, 1.0,
                                     {AffineBranch{0.0, 1.0, 2.0, 0.0}}),
                  PreconditionError);
}
