#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "mdimlab/truncated_system.hpp"
#include "oracles.hpp"

using namespace mdimlab;

TEST_CASE("phi_sr block endpoints follow the geometric partial sums") {
  auto sys = make_phi_sr(1, 1.0, 3);
  REQUIRE(sys.blocks().size() == 3);
  CHECK(sys.blocks()[0].lo() == Catch::Approx(0.0).margin(1e-15));
  CHECK(sys.blocks()[0].hi() == Catch::Approx(2.0 / 3.0).margin(1e-14));
  CHECK(sys.blocks()[1].hi() == Catch::Approx(8.0 / 9.0).margin(1e-14));
  CHECK(sys.blocks()[2].hi() == Catch::Approx(26.0 / 27.0).margin(1e-14));
  CHECK(sys.tail_fixed_point() == Catch::Approx(26.0 / 27.0).margin(1e-14));

  // independent partial-sum oracle at several (r, n)
  for (double r : {0.5, 1.0, 2.0}) {
    auto s = make_phi_sr(1, r, 6);
    for (int n = 0; n < 6; ++n)
      CHECK(s.blocks()[n].hi() ==
            Catch::Approx(oracles::geometric_endpoint(r, n + 1)).margin(1e-13));
  }
}

TEST_CASE("phi_sr branch counts are 3^(s(n+1))") {
  auto s11 = make_phi_sr(1, 1.0, 3);
  CHECK(s11.blocks()[0].branches() == 3.0);
  CHECK(s11.blocks()[1].branches() == 9.0);
  CHECK(s11.blocks()[2].branches() == 27.0);

  auto s21 = make_phi_sr(2, 1.0, 1);
  CHECK(s21.blocks()[0].branches() == 9.0);

  // log form stays exact for deep blocks
  auto s140 = make_phi_sr(1, 1.0, 40);
  CHECK(s140.blocks()[39].log_branches() ==
        Catch::Approx(40.0 * std::log(3.0)).margin(1e-12));
}

TEST_CASE("varphi blocks: lengths 6/(pi^2 n^2), 3^n branches") {
  auto sys = make_varphi(3);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(sys.blocks()[0].length() == Catch::Approx(6.0 / pi2).margin(1e-13));
  CHECK(sys.blocks()[1].length() == Catch::Approx(6.0 / (4.0 * pi2)).margin(1e-13));
  CHECK(sys.blocks()[0].branches() == 3.0);
  CHECK(sys.blocks()[1].branches() == 9.0);
  CHECK(sys.blocks()[2].branches() == 27.0);
  CHECK(make_varphi(1).blocks().size() == 1);
  CHECK(make_varphi(1).blocks()[0].branches() == 3.0);
}

TEST_CASE("psi134 blocks: 2n+1 alternating full branches") {
  auto sys = make_psi134(3);
  CHECK(sys.blocks()[0].branches() == 3.0);
  CHECK(sys.blocks()[1].branches() == 5.0);
  CHECK(sys.blocks()[2].branches() == 7.0);

  auto m = sys.blocks()[0].materialize();
  REQUIRE(m.lap_count() == 3);
  CHECK(m.branches()[0].slope > 0.0);
  CHECK(m.branches()[1].slope < 0.0);
  CHECK(m.branches()[2].slope > 0.0);
}

TEST_CASE("block invariance: each block maps exactly onto itself") {
  for (auto sys : {make_phi_sr(1, 1.0, 4), make_varphi(3), make_psi134(4)}) {
    for (const auto& block : sys.blocks()) {
      auto m = block.materialize();
      auto image = m.image_of(block.lo(), block.hi());
      REQUIRE(image.size() == 1);
      CHECK(image[0].first == Catch::Approx(block.lo()).margin(1e-12));
      CHECK(image[0].second == Catch::Approx(block.hi()).margin(1e-12));
    }
  }
}

TEST_CASE("tail is frozen pointwise and endpoints are fixed") {
  auto sys = make_phi_sr(1, 1.0, 2);
  double tail = sys.tail_fixed_point();
  CHECK(sys.eval(tail) == tail);
  CHECK(sys.eval(0.95) == 0.95);
  CHECK(sys.eval(1.0) == 1.0);
  CHECK(sys.eval(0.0) == Catch::Approx(0.0).margin(1e-15));
  // shared block endpoint is fixed by both neighbours
  double shared = sys.blocks()[0].hi();
  CHECK(sys.eval(shared) == Catch::Approx(shared).margin(1e-12));
}

TEST_CASE("materialized system agrees with formula evaluation") {
  auto sys = make_phi_sr(1, 1.0, 3);
  auto m = sys.materialize();
  for (int i = 0; i <= 2000; ++i) {
    double x = i / 2000.0;
    CHECK(m.eval(x) == Catch::Approx(sys.eval(x)).margin(1e-11));
  }
}

TEST_CASE("power identity: the s-parameter family is the s-fold iterate") {
  for (double r : {0.5, 0.7}) {
    for (int s : {2, 3}) {
      const int K = 8;
      auto fast = make_phi_sr(s, r, K);
      auto base = make_phi_sr(1, r, K);
      double top = fast.tail_fixed_point();
      for (int i = 0; i <= 1000; ++i) {
        double x = top * i / 1000.0;
        double lhs = fast.eval(x);
        double rhs = base.iterate(x, s);
        REQUIRE(std::abs(lhs - rhs) < 1e-9);
      }
    }
  }
}

TEST_CASE("conjugacy h intertwines the two block families") {
  SECTION("r1 == r2 gives the identity") {
    auto h = conjugacy_h(1, 1.0, 1.0, 4);
    for (int i = 0; i <= 100; ++i) {
      double x = i / 100.0;
      CHECK(h.eval(x) == Catch::Approx(x).margin(1e-13));
    }
  }

  SECTION("block images match the target family") {
    auto h = conjugacy_h(1, 1.0, 2.0, 2);
    CHECK(h.eval(0.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(h.eval(2.0 / 3.0) == Catch::Approx(8.0 / 9.0).margin(1e-13));
    // strictly increasing
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      double y = h.eval(i / 200.0);
      CHECK(y > prev);
      prev = y;
    }
  }

  SECTION("h composes the dynamics: h . phi_{s,r1} = phi_{s,r2} . h") {
    struct Case { int s; double r1, r2; int K; };
    for (auto c : {Case{1, 1.0, 2.0, 6}, Case{2, 0.5, 1.5, 5}}) {
      auto h = conjugacy_h(c.s, c.r1, c.r2, c.K);
      auto phi1 = make_phi_sr(c.s, c.r1, c.K);
      auto phi2 = make_phi_sr(c.s, c.r2, c.K);
      for (int i = 0; i <= 1500; ++i) {
        double x = i / 1500.0;
        REQUIRE(std::abs(h.eval(phi1.eval(x)) - phi2.eval(h.eval(x))) < 1e-9);
      }
    }
  }
}

TEST_CASE("splice replaces a fixed-point window") {
  auto base = PiecewiseAffineMap::identity(0.0, 1.0);
  auto inner = make_phi_sr(1, 1.0, 5);
  auto result = splice(base, 0.5, 0.2, inner);
  const auto& f = result.map;

  SECTION("sup distance is below the window size") {
    CHECK(result.sup_distance_to_base < 0.2);
    // grid oracle never exceeds the exact sup
    double grid_sup = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      double x = i / 10000.0;
      grid_sup = std::max(grid_sup, std::abs(f.eval(x) - base.eval(x)));
    }
    CHECK(grid_sup <= result.sup_distance_to_base + 1e-12);
    CHECK(grid_sup > 0.0);
  }

  SECTION("window endpoints glue continuously") {
    CHECK(f.eval(0.5) == Catch::Approx(0.5).margin(1e-12));
    CHECK(f.eval(0.7) == Catch::Approx(base.eval(0.7)).margin(1e-12));
    CHECK(f.max_breakpoint_jump() < 1e-12);
  }

  SECTION("the inner window is fixed setwise") {
    auto image = f.image_of(0.5, 0.6);
    REQUIRE(image.size() == 1);
    CHECK(image[0].first == Catch::Approx(0.5).margin(1e-12));
    CHECK(image[0].second == Catch::Approx(0.6).margin(1e-12));
  }

  SECTION("conjugating the window back recovers the inner system") {
    for (int i = 0; i <= 2000; ++i) {
      double u = i / 2000.0;        // inner coordinate
      double x = 0.5 + 0.1 * u;      // window coordinate
      double back = (f.eval(x) - 0.5) / 0.1;
      REQUIRE(std::abs(back - inner.eval(u)) < 1e-10);
    }
  }

  SECTION("base is untouched outside the window") {
    for (double x : {0.0, 0.1, 0.3, 0.49, 0.71, 0.9, 1.0})
      CHECK(f.eval(x) == Catch::Approx(base.eval(x)).margin(1e-12));
  }
}

TEST_CASE("splice on a non-trivial base map") {
  auto base = tent3();  // fixes 0.5
  auto inner = make_phi_sr(1, 1.0, 3);
  auto result = splice(base, 0.5, 0.1, inner);
  CHECK(result.map.max_breakpoint_jump() < 1e-12);
  CHECK(result.map.eval(0.5) == Catch::Approx(0.5).margin(1e-12));
  CHECK(result.map.eval(0.6) == Catch::Approx(base.eval(0.6)).margin(1e-12));
  // the oscillation of tent3 over [0.5, 0.6] bounds the distance
  CHECK(result.sup_distance_to_base < 0.45);
  for (double x : {0.0, 0.2, 0.4, 0.49, 0.61, 0.8, 1.0})
    CHECK(result.map.eval(x) == Catch::Approx(base.eval(x)).margin(1e-12));
}

TEST_CASE("splice rejects bad inputs") {
  auto inner = make_phi_sr(1, 1.0, 2);
  CHECK_THROWS_AS(splice(tent3(), 0.3, 0.1, inner), PreconditionError);
  CHECK_THROWS_AS(splice(tent3(), 0.5, 0.0, inner), PreconditionError);
  CHECK_THROWS_AS(
      splice(PiecewiseAffineMap::identity(0.0, 1.0), 0.95, 0.2, inner),
      DomainError);
}

TEST_CASE("constructor guards") {
  CHECK_THROWS_AS(make_phi_sr(0, 1.0, 3), PreconditionError);
  CHECK_THROWS_AS(make_phi_sr(1, -1.0, 3), PreconditionError);
  CHECK_THROWS_AS(make_phi_sr(1, 1.0, 0), PreconditionError);
  CHECK_THROWS_AS(make_varphi(0), PreconditionError);
  CHECK_THROWS_AS(make_psi134(0), PreconditionError);
}
