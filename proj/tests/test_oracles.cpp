#include <cmath>

#include "doctest.h"
#include "semiflow/errors.hpp"
#include "semiflow/oracles.hpp"
#include "semiflow/stepping.hpp"

using namespace semiflow;

TEST_CASE("rk4 integrates the scalar exponential to machine-level accuracy") {
  const auto rhs = [](double, double x) { return x; };
  ScalarTrajectory traj = rk4_scalar(rhs, 1.0, 1.0, 100);
  REQUIRE(traj.times.size() == 101);
  CHECK(std::abs(traj.values.back() - std::exp(1.0)) < 1e-9);

  const double e1 = std::abs(rk4_scalar(rhs, 1.0, 1.0, 100).values.back() - std::exp(1.0));
  const double e2 = std::abs(rk4_scalar(rhs, 1.0, 1.0, 200).values.back() - std::exp(1.0));
  CHECK(e1 / e2 >= 14.0);  // fourth order: the ratio approaches 16
}

TEST_CASE("spectral heat solution decays mode by mode") {
  Geometry grid;
  grid.dim = 1;
  grid.length = {1.0, 0.0};
  grid.nodes = {101, 0};
  grid.boundary = BoundaryKind::dirichlet_zero;

  const double pi = std::acos(-1.0);
  const double t = std::log(2.0) / (pi * pi);  // first mode halves exactly
  GridFunction u = heat_spectral({{1, 1.0}}, 1.0, t, grid);
  CHECK(u[50] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u[0] == 0.0);
  CHECK(u[100] == 0.0);

  // Two modes superpose linearly; the k-th decays with rate (k pi)^2.
  GridFunction v = heat_spectral({{1, 1.0}, {3, 0.5}}, 1.0, 0.01, grid);
  const double x = 0.25;
  const double expected = std::exp(-pi * pi * 0.01) * std::sin(pi * x) +
                          0.5 * std::exp(-9 * pi * pi * 0.01) * std::sin(3 * pi * x);
  CHECK(v[25] == doctest::Approx(expected).epsilon(1e-12));

  CHECK(heat_lambda1(2.0) == doctest::Approx(pi * pi / 4.0));
}

TEST_CASE("maximal solutions through zero") {
  // omega(x) = 2 sqrt(x) admits the continuum of solutions through 0; the
  // maximal one is t^2 and the lifted construction must find it, not 0.
  OmegaFunction sqrt2 =
      omega_custom([](double t) { return 2.0 * std::sqrt(std::max(0.0, t)); }, true);
  PerronResult res = perron_max_solution(sqrt2, 0.0, 1.0);
  CHECK(!res.truncated);
  CHECK(res.lifted.size() == default_eps_schedule().size());
  CHECK(res.estimate.values.back() == doctest::Approx(1.0).epsilon(1e-4));
  // Quarter point: (1/2)^2.
  const std::size_t quarter = res.estimate.times.size() / 2;
  CHECK(res.estimate.values[quarter] ==
        doctest::Approx(res.estimate.times[quarter] * res.estimate.times[quarter])
            .epsilon(1e-3));

  // omega = 0 pins the solution at the start value.
  PerronResult flat = perron_max_solution(omega_linear(0.0), 0.7, 1.0);
  CHECK(flat.estimate.values.back() == doctest::Approx(0.7).epsilon(1e-9));

  // Linear growth reproduces the exponential.
  PerronResult lin = perron_max_solution(omega_linear(1.0), 1.0, 1.0);
  CHECK(lin.estimate.values.back() == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("domination verdicts carry a witness") {
  ScalarTrajectory u{{0.0, 0.5, 1.0}, {0.0, 0.2, 0.9}};
  ScalarTrajectory hi{{0.0, 0.5, 1.0}, {0.0, 0.25, 1.0}};

  ComparisonResult ok = comparison_check(u, omega_linear(0.0), hi);
  CHECK(static_cast<bool>(ok));
  CHECK(!ok.witness_index.has_value());
  CHECK(ok.worst_gap <= 0.0);

  ComparisonResult bad = comparison_check(hi, omega_linear(0.0), u);
  CHECK(!static_cast<bool>(bad));
  REQUIRE(bad.witness_index.has_value());
  CHECK(*bad.witness_index == 1);
  CHECK(bad.worst_gap == doctest::Approx(0.1));

  ScalarTrajectory mismatched{{0.0, 1.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(comparison_check(u, omega_linear(0.0), mismatched), PreconditionError);
}

TEST_CASE("fine explicit march reproduces the heat semigroup for p = 2") {
  PLaplaceSpec spec;
  spec.p = 2.0;
  spec.interior_nodes = 39;
  const Geometry geom = geometry_of(spec);

  const double pi = std::acos(-1.0);
  GridFunction x0 =
      GridFunction::sample(geom, [&](double x, double) { return std::sin(pi * x); });

  ExplicitResult res = fine_explicit_plaplace(spec, zero_forcing(), x0, {0.0, 0.05});
  REQUIRE(!res.aborted);
  REQUIRE(res.trajectory.size() == 2);
  GridFunction ref = heat_spectral({{1, 1.0}}, 1.0, 0.05, geom);
  CHECK((res.trajectory.states.back() - ref).sup_norm() < 5e-3);
}

TEST_CASE("fine explicit march agrees with the implicit solver for p = 3") {
  PLaplaceSpec spec;
  spec.p = 3.0;
  spec.interior_nodes = 39;
  const Geometry geom = geometry_of(spec);
  ResolventOracle op = make_plaplace(spec);

  const double pi = std::acos(-1.0);
  GridFunction x0 = GridFunction::sample(
      geom, [&](double x, double) { return 0.8 * std::sin(pi * x); });

  ExplicitResult fine = fine_explicit_plaplace(spec, zero_forcing(), x0, {0.0, 0.05});
  REQUIRE(!fine.aborted);
  MarchResult implicit = solve_integral(op, zero_forcing(), x0, 0.05, 400);
  REQUIRE(!implicit.blew_up);
  CHECK((fine.trajectory.states.back() - implicit.trajectory.states.back()).sup_norm() < 5e-3);
}
