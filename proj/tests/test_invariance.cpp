#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "semiflow/constraint.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/impulsive.hpp"
#include "semiflow/invariance.hpp"
#include "semiflow/omega.hpp"
#include "semiflow/operators.hpp"
#include "semiflow/rng.hpp"
#include "test_utils.hpp"

using namespace semiflow;

TEST_CASE("constraint functionals measure obstacle defects") {
  Geometry g;
  g.nodes = {5, 0};
  GridFunction m = GridFunction::constant(g, 0.0);
  ConstraintFunctional lower = quad_lower_obstacle(m);

  GridFunction above(g, {1.0, 0.5, 2.0, 0.5, 1.0});
  CHECK(lower.eval(above) == 0.0);

  GridFunction below(g, {0.0, -1.0, 0.0, 0.0, 0.0});
  // 0.5 * trapezoid of (u - m)_-^2 with spacing 1/4.
  CHECK(lower.eval(below) == doctest::Approx(0.5 * 0.25));
  GridFunction grad = lower.grad(below);
  CHECK(grad[1] == doctest::Approx(-1.0));
  CHECK(grad[0] == 0.0);

  ConstraintFunctional upper = quad_upper_obstacle(m);
  CHECK(upper.eval(below) == 0.0);
  CHECK(upper.eval(above) > 0.0);

  ConstraintFunctional dist = sup_distance_lower(m);
  CHECK(dist.eval(below) == doctest::Approx(1.0));
  CHECK(!dist.grad);

  CHECK(default_exit_tol(ConstraintKind::quad_lower_obstacle) == doctest::Approx(1e-8));
}

TEST_CASE("rollout derivative matches the chain rule on the linear model") {
  DiagonalSpec spec;
  spec.coefficient = 0.8;
  ResolventOracle op = make_diagonal(spec);

  ConstraintFunctional V = custom_constraint(
      [](const GridFunction& x) { return 0.5 * trap_inner(x, x); },
      [](const GridFunction& x) { return x; });

  GridFunction x = GridFunction::scalar(1.3);
  GridFunction v = GridFunction::scalar(-0.4);
  ADerivativeResult res = a_derivative(op, V, x, v);

  // d/dh V(u(h)) at 0+ equals <x, v - A x> in the trapezoid pairing.
  const double analytic = trap_inner(x, v - op.apply(x));
  CHECK(std::abs(res.value - analytic) <= res.error_bound + 1e-9);
  CHECK(res.error_bound < 1e-2);
  CHECK(res.h_used.size() == default_h_schedule().size());
  CHECK(res.quotients.size() == res.h_used.size());
}

TEST_CASE("rollout derivative on the heat flow with a quadratic obstacle") {
  LaplaceSpec spec;
  spec.nodes = {41, 0};
  ResolventOracle op = make_laplace(spec);
  const Geometry geom = geometry_of(spec);
  Geometry free = geom;
  free.boundary = BoundaryKind::none;

  GridFunction m = GridFunction::constant(free, 0.1);
  ConstraintFunctional V = quad_lower_obstacle(m);

  // A state partly below the obstacle so that the gradient is active.
  const double pi = std::acos(-1.0);
  GridFunction x = GridFunction::sample(
      geom, [&](double t, double) { return 0.05 * std::sin(pi * t); });
  std::mt19937_64 rng = make_rng(5);
  GridFunction v = testutil::random_sine_state(geom, rng, 0.3);

  ADerivativeResult res = a_derivative(op, V, x, v);
  const double analytic = trap_inner(V.grad(x), v - op.apply(x));
  CHECK(std::abs(res.value - analytic) <= res.error_bound + 1e-9);
}

TEST_CASE("pointwise condition certifies an inward-pointing field") {
  DiagonalSpec spec;
  spec.coefficient = 1.0;  // A x = x pulls toward the origin in u' = -A u
  ResolventOracle op = make_diagonal(spec);

  GridFunction m = GridFunction::constant(scalar_geometry(), 0.0);
  ConstraintFunctional V = quad_lower_obstacle(m);

  StateMap f = [](const GridFunction& u) { return GridFunction::zeros(u.geometry()); };
  std::vector<GridFunction> samples;
  for (int k = 1; k <= 6; ++k) samples.push_back(GridFunction::scalar(-0.1 * k));

  CertReport rep =
      check_pointwise_condition(op, f, V, omega_linear(0.0), samples, Region::outside_K);
  CHECK(rep.verdict == Verdict::certified);
  CHECK(rep.stats.at("samples_checked") == 6.0);

  // Flip the field outward and the same samples witness a violation.
  StateMap bad = [&](const GridFunction& u) { return 3.0 * op.apply(u); };
  CertReport repbad =
      check_pointwise_condition(op, bad, V, omega_linear(0.0), samples, Region::outside_K);
  CHECK(repbad.verdict == Verdict::violated);
  CHECK(!repbad.witnesses.empty());
}

TEST_CASE("pointwise condition reports inconclusive honestly") {
  DiagonalSpec spec;
  ResolventOracle op = make_diagonal(spec);
  GridFunction m = GridFunction::constant(scalar_geometry(), 0.0);
  ConstraintFunctional V = quad_lower_obstacle(m);
  StateMap f = [](const GridFunction& u) { return GridFunction::zeros(u.geometry()); };

  // All samples inside the constraint set: nothing to check outside K.
  std::vector<GridFunction> inside{GridFunction::scalar(0.5), GridFunction::scalar(1.0)};
  CertReport skipped =
      check_pointwise_condition(op, f, V, omega_linear(0.0), inside, Region::outside_K);
  CHECK(skipped.verdict == Verdict::inconclusive);
  CHECK(skipped.stats.at("samples_skipped") == 2.0);

  // No direct application available: the condition cannot be evaluated.
  ResolventOracle stripped = op;
  stripped.apply = {};
  std::vector<GridFunction> outside{GridFunction::scalar(-0.5)};
  CertReport noapply =
      check_pointwise_condition(stripped, f, V, omega_linear(0.0), outside, Region::outside_K);
  CHECK(noapply.verdict == Verdict::inconclusive);

  // A nonsmooth functional has no gradient to pair with.
  ConstraintFunctional dist = sup_distance_lower(m);
  CertReport nograd =
      check_pointwise_condition(op, f, dist, omega_linear(0.0), outside, Region::outside_K);
  CHECK(nograd.verdict == Verdict::inconclusive);
}

TEST_CASE("monitor finds the first exit from the sublevel set") {
  Geometry g = scalar_geometry();
  GridFunction m = GridFunction::constant(g, 0.0);
  ConstraintFunctional V = quad_lower_obstacle(m);

  Trajectory traj;
  for (int k = 0; k <= 10; ++k) {
    traj.times.push_back(0.1 * k);
    traj.states.push_back(GridFunction::constant(g, 0.5 - 0.1 * k));  // crosses 0 at t = 0.5
    traj.forcings.push_back(GridFunction::zeros(g));
  }
  MonitorReport rep = monitor(traj, V, default_exit_tol(V.kind));
  REQUIRE(rep.v_series.size() == traj.size());
  CHECK(rep.v_series.front() == 0.0);
  CHECK(rep.v_series.back() > 0.0);
  REQUIRE(rep.first_exit.has_value());
  CHECK(*rep.first_exit == doctest::Approx(0.6));  // first sample with V above tolerance
  CHECK(rep.dini_series.size() == traj.size() - 1);

  // A trajectory that stays above the obstacle never exits.
  Trajectory safe;
  for (int k = 0; k <= 5; ++k) {
    safe.times.push_back(0.1 * k);
    safe.states.push_back(GridFunction::constant(g, 1.0));
    safe.forcings.push_back(GridFunction::zeros(g));
  }
  CHECK(!monitor(safe, V, 1e-8).first_exit.has_value());
}

TEST_CASE("slow functions certify against the sample grid") {
  CertReport linear = certify_slow([](double x) { return x; }, 0.5);
  CHECK(linear.verdict == Verdict::certified);
  CHECK(linear.stats.at("min_quotient") == doctest::Approx(1.0));
  CHECK(linear.stats.at("M") == 2.0);
  CHECK(linear.stats.at("tau") == doctest::Approx(0.25));

  CHECK(certify_slow([](double x) { return x * x; }, 0.5).verdict == Verdict::certified);
  CHECK(certify_slow([](double x) { return x * std::log1p(x); }, 0.5).verdict ==
        Verdict::certified);

  CertReport root = certify_slow([](double x) { return std::sqrt(x); }, 0.5);
  CHECK(root.verdict == Verdict::violated);
  CHECK(!root.witnesses.empty());
  CHECK(root.stats.at("min_quotient") == doctest::Approx(1e-3));

  // Monotone in gamma: what certifies at a level certifies below it.
  CHECK(certify_slow([](double x) { return std::sqrt(x); }, 1e-4).verdict ==
        Verdict::certified);

  CHECK_THROWS_AS(certify_slow({}, 0.5), PreconditionError);
  CHECK_THROWS_AS(certify_slow([](double x) { return x; }, 0.0), PreconditionError);
  CHECK_THROWS_AS(certify_slow([](double x) { return x; }, 0.5, {}), PreconditionError);
  CHECK_THROWS_AS(certify_slow([](double x) { return x; }, 0.5, {0.5, -0.5}),
                  PreconditionError);
}

TEST_CASE("comparison function factories validate their samples") {
  CHECK_THROWS_AS(omega_linear(-1.0), PreconditionError);
  CHECK_THROWS_AS(omega_power(1.0, 0.5), PreconditionError);
  CHECK_THROWS_AS(omega_custom([](double) { return 1.0; }), PreconditionError);
  CHECK_THROWS_AS(omega_custom([](double t) { return -t; }), PreconditionError);

  OmegaFunction xlog = omega_xlog();
  CHECK(xlog(0.0) == 0.0);
  CHECK(xlog(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(omega_linear(2.0)(3.0) == 6.0);
}

TEST_CASE("impulsive march without barriers is the plain march, bit for bit") {
  DiagonalSpec spec;
  spec.coefficient = 1.0;
  ResolventOracle op = make_diagonal(spec);
  Forcing f = [](double t, const GridFunction& u) {
    return GridFunction::constant(u.geometry(), std::sin(t) - 0.2 * u.scalar_value());
  };
  GridFunction x0 = GridFunction::scalar(1.0);

  ImpulsiveResult imp = simulate_impulsive(op, f, {}, x0, 1.0, 50);
  MarchResult plain = solve_integral(op, f, x0, 1.0, 50);
  REQUIRE(imp.trajectory.size() == plain.trajectory.size());
  for (std::size_t k = 0; k < imp.trajectory.size(); ++k) {
    CHECK(imp.trajectory.states[k].scalar_value() == plain.trajectory.states[k].scalar_value());
  }
  CHECK(imp.jumps.empty());
  CHECK(imp.hit_counts.empty());
  CHECK(imp.violations.empty());
}

TEST_CASE("a constant barrier fires once at its stated time") {
  ResolventOracle op = make_zero_operator(scalar_geometry());
  Barrier b;
  b.tau = [](const GridFunction&) { return 1.0; };
  b.impulse = [](const GridFunction& u) { return GridFunction::constant(u.geometry(), 1.0); };

  ImpulsiveResult res =
      simulate_impulsive(op, zero_forcing(), {b}, GridFunction::scalar(0.0), 2.0, 200);
  REQUIRE(res.jumps.size() == 1);
  CHECK(res.hit_counts == std::vector<int>{1});
  CHECK(res.jumps[0].time == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.jumps[0].before.scalar_value() == doctest::Approx(0.0));
  CHECK(res.jumps[0].after.scalar_value() == doctest::Approx(1.0));
  CHECK(res.jumps[0].tau_before == doctest::Approx(1.0));
  CHECK(res.violations.empty());
  CHECK(res.trajectory.states.back().scalar_value() == doctest::Approx(1.0));
}

TEST_CASE("repeat hits and epigraph escapes are recorded, not thrown") {
  // Growing flow u' = 0.5 u against the barrier t = u: the jump +0.3 lands
  // outside the epigraph and the graph is crossed a second time.
  DiagonalSpec spec;
  spec.coefficient = -0.5;
  ResolventOracle op = make_diagonal(spec);
  Barrier b;
  b.tau = [](const GridFunction& u) { return u.scalar_value(); };
  b.impulse = [](const GridFunction& u) { return GridFunction::constant(u.geometry(), 0.3); };

  ImpulsiveResult res =
      simulate_impulsive(op, zero_forcing(), {b}, GridFunction::scalar(0.5), 3.0, 3000);
  CHECK(res.hit_counts == std::vector<int>{2});
  CHECK(res.jumps.size() == 2);
  CHECK(res.violations.size() >= 2);
  bool mentions_second = false, mentions_epigraph = false;
  for (const std::string& v : res.violations) {
    if (v.find("second") != std::string::npos || v.find("again") != std::string::npos)
      mentions_second = true;
    if (v.find("epigraph") != std::string::npos) mentions_epigraph = true;
  }
  CHECK(mentions_second);
  CHECK(mentions_epigraph);
}
