#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semiflow/expression.hpp"
#include "semiflow/impulsive.hpp"
#include "semiflow/operators.hpp"
#include "semiflow/stepping.hpp"

namespace semiflow {

enum class ProblemKind {
  plaplace_obstacle,
  reaction_diffusion,
  age_structured,
  impulsive,
  custom_linear,
};

std::string to_string(ProblemKind kind);

// A fully parsed scenario file. Expression slots restrict their variables:
// m, M, beta may read x only; forcings read x and u for the PDE kinds and
// u and t for the scalar kinds; barriers read u only.
struct Scenario {
  std::string name;
  ProblemKind kind = ProblemKind::custom_linear;

  // operator parameters
  double p = 3.0;
  double length = 1.0;    // domain length, age horizon, or rectangle width
  double length_y = 1.0;  // rectangle height (2D reaction diffusion)
  int nodes = 101;        // p-Laplace: interior nodes; otherwise total per axis
  int nodes_y = 0;
  int dim = 1;
  double coefficient = 0.0;  // scalar kinds: A u = coefficient * u
  Expression beta;           // age kind: birth kernel beta(x)

  Expression f;  // empty: zero forcing
  Expression m;
  Expression M;

  Expression x0;
  std::string x0_profile;  // 2D initial data: "product_sine" or "zero"
  double x0_amplitude = 1.0;

  std::vector<Expression> taus;
  std::vector<Expression> impulses;

  double T = 1.0;
  int steps = 100;

  std::vector<double> delta_family{1e-2, 1e-3, 1e-4};
  int samples_per_delta = 8;
  std::string omega_choice = "auto";
  std::uint64_t seed = 0;
};

Scenario parse_scenario_text(const std::string& text, const std::string& name);
Scenario parse_scenario_file(const std::string& path);

// Scenario with its pieces materialized on the grid.
struct Problem {
  Scenario scenario;
  Geometry geometry;
  ResolventOracle op;
  Forcing forcing;
  GridFunction x0;
  std::optional<GridFunction> m;
  std::optional<GridFunction> M;
  std::vector<double> beta_values;
  std::vector<Barrier> barriers;
};

Problem build_problem(const Scenario& s);

// Evaluates an x-only expression nodewise; x is the first-axis coordinate.
GridFunction sample_profile(const Expression& expr, const Geometry& geometry);

}  // namespace semiflow
