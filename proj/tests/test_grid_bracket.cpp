#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "semiflow/bracket.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/grid_function.hpp"
#include "semiflow/rng.hpp"
#include "test_utils.hpp"

using namespace semiflow;

namespace {

Geometry line_geometry(int nodes, BoundaryKind boundary, NormTag tag) {
  Geometry g;
  g.dim = 1;
  g.length = {1.0, 0.0};
  g.nodes = {nodes, 0};
  g.boundary = boundary;
  g.norm_tag = tag;
  return g;
}

}  // namespace

TEST_CASE("geometry bookkeeping") {
  Geometry g = line_geometry(5, BoundaryKind::none, NormTag::sup);
  CHECK(g.total_nodes() == 5);
  CHECK(g.spacing(0) == doctest::Approx(0.25));
  CHECK(g.coord(0, 2) == doctest::Approx(0.5));
  CHECK(g.on_boundary(0));
  CHECK(g.on_boundary(4));
  CHECK(!g.on_boundary(2));

  // End-halved trapezoid weights sum to the domain length.
  double total = 0.0;
  for (int i = 0; i < 5; ++i) total += g.quad_weight(i);
  CHECK(total == doctest::Approx(1.0));
  CHECK(g.quad_weight(0) == doctest::Approx(0.125));
  CHECK(g.quad_weight(1) == doctest::Approx(0.25));

  Geometry g2;
  g2.dim = 2;
  g2.length = {1.0, 2.0};
  g2.nodes = {3, 5};
  CHECK(g2.total_nodes() == 15);
  CHECK(g2.spacing(1) == doctest::Approx(0.5));
  CHECK(g2.on_boundary(1));   // bottom edge
  CHECK(g2.on_boundary(3));   // left edge
  CHECK(!g2.on_boundary(4));  // interior of the 3x5 block
  double total2 = 0.0;
  for (int i = 0; i < 15; ++i) total2 += g2.quad_weight(i);
  CHECK(total2 == doctest::Approx(2.0));
}

TEST_CASE("geometry compatibility ignores boundary kind") {
  Geometry a = line_geometry(7, BoundaryKind::dirichlet_zero, NormTag::l2);
  Geometry b = line_geometry(7, BoundaryKind::none, NormTag::l2);
  Geometry c = line_geometry(9, BoundaryKind::none, NormTag::l2);
  CHECK(compatible(a, b));
  CHECK(!compatible(a, c));
  CHECK(!compatible(a, line_geometry(7, BoundaryKind::none, NormTag::sup)));
}

TEST_CASE("dirichlet construction rejects nonzero boundary values") {
  Geometry g = line_geometry(5, BoundaryKind::dirichlet_zero, NormTag::sup);
  CHECK_NOTHROW(GridFunction(g, {0.0, 1.0, 2.0, 1.0, 0.0}));
  CHECK_THROWS_AS(GridFunction(g, {0.1, 1.0, 2.0, 1.0, 0.0}), GeometryError);
  CHECK_THROWS_AS(GridFunction(g, {0.0, 1.0, 2.0, 1.0, 1e-7}), GeometryError);
}

TEST_CASE("sampling snaps roundoff at pinned boundary nodes") {
  Geometry g = line_geometry(101, BoundaryKind::dirichlet_zero, NormTag::sup);
  const double pi = std::acos(-1.0);
  // sin(pi * 1.0) evaluates to ~1.2e-16, not exactly zero.
  GridFunction u = GridFunction::sample(g, [&](double x, double) { return std::sin(pi * x); });
  CHECK(u[0] == 0.0);
  CHECK(u[100] == 0.0);
  CHECK(u[50] == doctest::Approx(1.0));
  // A genuine violation still throws.
  CHECK_THROWS_AS(GridFunction::sample(g, [](double, double) { return 1.0; }), GeometryError);
}

TEST_CASE("norms and inner products") {
  Geometry g = line_geometry(3, BoundaryKind::none, NormTag::sup);
  GridFunction u(g, {1.0, -4.0, 2.0});
  CHECK(u.sup_norm() == 4.0);
  CHECK(u.l2_norm() == doctest::Approx(std::sqrt(21.0)));
  CHECK(u.norm() == 4.0);  // sup tag

  Geometry gl2 = line_geometry(3, BoundaryKind::none, NormTag::l2);
  GridFunction v(gl2, {1.0, -4.0, 2.0});
  CHECK(v.norm() == doctest::Approx(std::sqrt(21.0)));

  GridFunction w(g, {2.0, 1.0, 0.5});
  CHECK(dot(u, w) == doctest::Approx(1.0 * 2.0 - 4.0 * 1.0 + 2.0 * 0.5));

  // Trapezoid rule is exact for linear integrands: int_0^1 x dx = 1/2.
  Geometry gq = line_geometry(11, BoundaryKind::none, NormTag::sup);
  GridFunction id = GridFunction::sample(gq, [](double x, double) { return x; });
  CHECK(trap_integral(id) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(trap_inner(id, id) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("arithmetic merges boundary kinds") {
  Geometry gd = line_geometry(5, BoundaryKind::dirichlet_zero, NormTag::sup);
  Geometry gn = line_geometry(5, BoundaryKind::none, NormTag::sup);
  GridFunction a(gd, {0.0, 1.0, 2.0, 1.0, 0.0});
  GridFunction b(gn, {1.0, 1.0, 1.0, 1.0, 1.0});

  GridFunction sum = a + b;
  CHECK(sum.geometry().boundary == BoundaryKind::none);
  CHECK(sum[0] == 1.0);
  CHECK(sum[2] == 3.0);

  GridFunction same = a + GridFunction(gd, {0.0, 0.5, 0.5, 0.5, 0.0});
  CHECK(same.geometry().boundary == BoundaryKind::dirichlet_zero);

  GridFunction diff = a - b;
  CHECK(diff[0] == -1.0);
  GridFunction scaled = 3.0 * a;
  CHECK(scaled[2] == 6.0);
  GridFunction comb = axpy(a, -2.0, b);
  CHECK(comb[1] == -1.0);

  GridFunction mapped = b.map([](double x) { return x * x + 1.0; });
  CHECK(mapped[3] == 2.0);

  CHECK_THROWS_AS(a + GridFunction(line_geometry(7, BoundaryKind::none, NormTag::sup),
                                   std::vector<double>(7, 0.0)),
                  GeometryError);
}

TEST_CASE("scalar embedding behaves like a number") {
  GridFunction s = GridFunction::scalar(-2.5);
  CHECK(s.size() == 3);
  CHECK(s.scalar_value() == -2.5);
  CHECK(s.norm() == 2.5);
  GridFunction t = GridFunction::scalar(1.0);
  CHECK((s + t).scalar_value() == -1.5);
}

TEST_CASE("l2 bracket closed forms") {
  Geometry g = line_geometry(4, BoundaryKind::none, NormTag::l2);
  GridFunction x(g, {3.0, 0.0, 4.0, 0.0});
  GridFunction y(g, {1.0, -2.0, 2.0, 5.0});
  const double expected = dot(x, y) / x.norm();  // (3 + 8) / 5
  CHECK(bracket(x, y, BracketSide::plus) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(bracket(x, y, BracketSide::minus) == doctest::Approx(expected).epsilon(1e-14));

  GridFunction zero = GridFunction::zeros(g);
  CHECK(bracket(zero, y, BracketSide::plus) == doctest::Approx(y.norm()));
  CHECK(bracket(zero, y, BracketSide::minus) == doctest::Approx(-y.norm()));
}

TEST_CASE("sup bracket takes extremes over attaining nodes") {
  Geometry g = line_geometry(4, BoundaryKind::none, NormTag::sup);

  // Unique attaining node 1, negative sign there.
  GridFunction x(g, {1.0, -3.0, 2.0, 0.0});
  GridFunction y(g, {9.0, 5.0, -9.0, 9.0});
  CHECK(bracket(x, y, BracketSide::plus) == doctest::Approx(-5.0));
  CHECK(bracket(x, y, BracketSide::minus) == doctest::Approx(-5.0));

  // Tie between node 0 (positive) and node 2 (negative).
  GridFunction xt(g, {3.0, 1.0, -3.0, 0.0});
  GridFunction yt(g, {2.0, 0.0, 1.0, 0.0});
  CHECK(bracket(xt, yt, BracketSide::plus) == doctest::Approx(2.0));   // max(2, -1)
  CHECK(bracket(xt, yt, BracketSide::minus) == doctest::Approx(-1.0));  // min(2, -1)

  GridFunction zero = GridFunction::zeros(g);
  CHECK(bracket(zero, y, BracketSide::plus) == doctest::Approx(9.0));
  CHECK(bracket(zero, y, BracketSide::minus) == doctest::Approx(-9.0));
}

TEST_CASE("bracket matches one-sided difference quotients") {
  for (NormTag tag : {NormTag::sup, NormTag::l2}) {
    Geometry g = line_geometry(33, BoundaryKind::none, tag);
    std::mt19937_64 rng = make_rng(7, tag == NormTag::sup ? 1 : 2);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      GridFunction x = testutil::random_sine_state(g, rng);
      GridFunction y = testutil::random_sine_state(g, rng);
      if (x.norm() < 1e-2) continue;
      ++checked;
      const double plus = bracket(x, y, BracketSide::plus);
      const double minus = bracket(x, y, BracketSide::minus);
      CHECK(std::abs(plus - testutil::bracket_quotient(x, y, +1)) < 1e-6);
      CHECK(std::abs(minus - testutil::bracket_quotient(x, y, -1)) < 1e-6);
      CHECK(minus <= plus + 1e-12);
    }
    CHECK(checked > 90);
  }
}

TEST_CASE("bracket inequalities") {
  Geometry g = line_geometry(17, BoundaryKind::none, NormTag::sup);
  std::mt19937_64 rng = make_rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    GridFunction x = testutil::random_sine_state(g, rng);
    GridFunction y1 = testutil::random_sine_state(g, rng);
    GridFunction y2 = testutil::random_sine_state(g, rng);

    // Subadditivity in the direction and the reflection identity.
    CHECK(bracket(x, y1 + y2, BracketSide::plus) <=
          bracket(x, y1, BracketSide::plus) + bracket(x, y2, BracketSide::plus) + 1e-12);
    CHECK(std::abs(bracket(x, -1.0 * y1, BracketSide::plus) +
                   bracket(x, y1, BracketSide::minus)) < 1e-12);

    // Positive homogeneity in x and the norm bound.
    CHECK(std::abs(bracket(2.5 * x, y1, BracketSide::plus) -
                   bracket(x, y1, BracketSide::plus)) < 1e-12);
    CHECK(std::abs(bracket(x, y1, BracketSide::plus)) <= y1.norm() + 1e-12);
  }
}
