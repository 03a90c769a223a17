#include <cmath>

#include "doctest.h"
#include "semiflow/errors.hpp"
#include "semiflow/operators.hpp"
#include "semiflow/oracles.hpp"
#include "semiflow/residuals.hpp"
#include "semiflow/stepping.hpp"

using namespace semiflow;

namespace {

ResolventOracle scalar_decay(double c) {
  DiagonalSpec spec;
  spec.coefficient = c;
  return make_diagonal(spec);
}

}  // namespace

TEST_CASE("exponential formula on the scalar decay model") {
  ResolventOracle op = scalar_decay(1.0);
  GridFunction one = GridFunction::scalar(1.0);

  // J_{t/n}^n 1 = (1 + t/n)^{-n}: frozen small cases.
  CHECK(crandall_liggett(op, one, 0.5, 1).scalar_value() == doctest::Approx(2.0 / 3.0));
  CHECK(crandall_liggett(op, one, 1.0, 4).scalar_value() == doctest::Approx(1.0 / 2.44140625));
  CHECK(crandall_liggett(op, one, 0.0, 7).scalar_value() == 1.0);

  // First-order convergence to e^{-t}.
  const double exact = std::exp(-1.0);
  double prev = 0.0;
  for (int n : {16, 32, 64, 128}) {
    const double err = std::abs(crandall_liggett(op, one, 1.0, n).scalar_value() - exact);
    if (prev > 0.0) CHECK(err < 0.6 * prev);
    prev = err;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("march reproduces scalar exponential growth") {
  ResolventOracle op = make_zero_operator(scalar_geometry());
  Forcing f = [](double, const GridFunction& u) { return u; };
  MarchResult res = solve_integral(op, f, GridFunction::scalar(1.0), 1.0, 16384);
  CHECK(!res.blew_up);
  CHECK(res.trajectory.size() == 16385);
  CHECK(res.trajectory.states.back().scalar_value() ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-4));
  CHECK(std::abs(res.trajectory.states.back().scalar_value() - std::exp(1.0)) < 2e-4);
  // Left-endpoint forcing is recorded along the path.
  CHECK(res.trajectory.forcings.front().scalar_value() == 1.0);
}

TEST_CASE("marching with zero forcing is the exponential formula, bit for bit") {
  PLaplaceSpec spec;
  spec.p = 3.0;
  spec.interior_nodes = 31;
  ResolventOracle op = make_plaplace(spec);
  const double pi = std::acos(-1.0);
  GridFunction x0 = GridFunction::sample(geometry_of(spec),
                                         [&](double x, double) { return std::sin(pi * x); });

  MarchResult res = solve_integral(op, zero_forcing(), x0, 0.25, 40);
  GridFunction direct = crandall_liggett(op, x0, 0.25, 40);
  REQUIRE(res.trajectory.size() == 41);
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(res.trajectory.states.back()[i] == direct[i]);
}

TEST_CASE("quadratic forcing blows up and is flagged") {
  ResolventOracle op = make_zero_operator(scalar_geometry());
  Forcing f = [](double, const GridFunction& u) {
    return GridFunction::scalar(u.scalar_value() * u.scalar_value());
  };
  MarchResult res = solve_integral(op, f, GridFunction::scalar(1.0), 2.0, 4000);
  CHECK(res.blew_up);
  CHECK(res.blowup_time > 0.9);
  CHECK(res.blowup_time < 2.0);
  CHECK(res.trajectory.size() >= 2);
  // The recorded prefix stays below the ceiling at the states before the abort.
  CHECK(res.trajectory.states[res.trajectory.size() - 2].norm() <= 1e8);
}

TEST_CASE("picard refinement moves the step toward the implicit value") {
  ResolventOracle op = make_zero_operator(scalar_geometry());
  Forcing f = [](double, const GridFunction& u) { return -50.0 * u; };

  MarchOptions semi;
  MarchResult a = solve_integral(op, f, GridFunction::scalar(1.0), 0.1, 10, semi);

  MarchOptions picard;
  picard.picard.enabled = true;
  MarchResult b = solve_integral(op, f, GridFunction::scalar(1.0), 0.1, 10, picard);

  // h = 0.01: semi-implicit gives (1 - 0.5)^k, fully implicit (1/1.5)^k.
  CHECK(a.trajectory.states.back().scalar_value() == doctest::Approx(std::pow(0.5, 10)));
  CHECK(b.trajectory.states.back().scalar_value() ==
        doctest::Approx(std::pow(1.0 / 1.5, 10)).epsilon(1e-9));
  CHECK(b.trajectory.step_meta.front().inner_iterations > 0);
  CHECK(b.trajectory.step_meta.front().picard_converged);
}

TEST_CASE("quasi-accretive shift reproduces the expanding scalar flow") {
  // A u = -0.5 u has alpha = 0.5; the march must still contract the
  // resolvent through the shifted operator and recover e^{0.5 t}.
  ResolventOracle op = scalar_decay(-0.5);
  CHECK(op.alpha == doctest::Approx(0.5));
  MarchResult res = solve_integral(op, zero_forcing(), GridFunction::scalar(1.0), 1.0, 2000);
  CHECK(!res.blew_up);
  CHECK(res.trajectory.states.back().scalar_value() ==
        doctest::Approx(std::exp(0.5)).epsilon(1e-3));

  GridFunction shifted = detail::resolve_shifted(op, 0.25, GridFunction::scalar(1.0));
  // A + alpha I = 0, so the shifted resolvent is the identity.
  CHECK(shifted.scalar_value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("step preconditions") {
  ResolventOracle op = scalar_decay(1.0);
  GridFunction one = GridFunction::scalar(1.0);
  CHECK_THROWS_AS(solve_integral(op, zero_forcing(), one, -1.0, 10), PreconditionError);
  CHECK_THROWS_AS(solve_integral(op, zero_forcing(), one, 1.0, 0), PreconditionError);
  CHECK_THROWS_AS(crandall_liggett(op, one, -0.5, 4), PreconditionError);
  CHECK_THROWS_AS(crandall_liggett(op, one, 0.5, 0), PreconditionError);
}

TEST_CASE("two-trajectory dissipativity estimate holds for the linear model") {
  // Closed-form trajectories of u' + u = 0 from different starts: the
  // difference contracts, so the estimate holds with slack.
  Geometry g = scalar_geometry();
  Trajectory u1, u2;
  for (int k = 0; k <= 40; ++k) {
    const double t = 0.05 * k;
    u1.times.push_back(t);
    u2.times.push_back(t);
    u1.states.push_back(GridFunction::constant(g, 2.0 * std::exp(-t)));
    u2.states.push_back(GridFunction::constant(g, 1.0 * std::exp(-t)));
    u1.forcings.push_back(GridFunction::zeros(g));
    u2.forcings.push_back(GridFunction::zeros(g));
  }
  CHECK(benilan_residual(u1, u2, 0.0) <= 1e-12);

  // Pure integration (A = 0) makes the estimate an identity: u1' = w1 with
  // w1 = e^{-t} >= 0, so the difference growth equals the forcing integral
  // and the residual is trapezoid error alone.
  Trajectory v1, v2;
  for (int k = 0; k <= 40; ++k) {
    const double t = 0.05 * k;
    v1.times.push_back(t);
    v2.times.push_back(t);
    v1.states.push_back(GridFunction::constant(g, 1.0 - std::exp(-t)));
    v2.states.push_back(GridFunction::zeros(g));
    v1.forcings.push_back(GridFunction::constant(g, std::exp(-t)));
    v2.forcings.push_back(GridFunction::zeros(g));
  }
  const double r = benilan_residual(v1, v2, 0.0);
  CHECK(r <= 1e-12);  // trapezoid overestimates a convex integrand
  CHECK(r >= -1e-3);  // and the estimate is tight, not slack
}

TEST_CASE("integral-solution inequality for the marched heat flow") {
  LaplaceSpec spec;
  spec.nodes = {41, 0};
  ResolventOracle op = make_laplace(spec);
  const Geometry geom = geometry_of(spec);
  const double pi = std::acos(-1.0);
  GridFunction x0 =
      GridFunction::sample(geom, [&](double x, double) { return std::sin(pi * x); });

  MarchResult res = solve_integral(op, zero_forcing(), x0, 0.2, 400);
  REQUIRE(!res.blew_up);

  // Graph pairs (y, A y) sampled through the Yosida approximation at small
  // lambda; the marched flow must satisfy the integral inequality against
  // every one of them.
  std::vector<std::pair<GridFunction, GridFunction>> graph;
  for (int k = 1; k <= 3; ++k) {
    GridFunction y = GridFunction::sample(
        geom, [&](double x, double) { return std::sin(k * pi * x) / k; });
    GridFunction jy = op.resolve(1e-6, y);
    graph.emplace_back(jy, yosida(op, 1e-6, y));
  }
  CHECK(integral_inequality_residual(res.trajectory, graph, 0.0) <= 1e-3);
}
