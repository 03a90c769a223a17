#pragma once

#include <functional>

#include "semiflow/grid_function.hpp"

namespace semiflow {

enum class ConstraintKind {
  quad_lower_obstacle,
  quad_upper_obstacle,
  sup_distance_lower,
  epigraph,
  custom,
};

// Scalar functional V whose sublevel set {V <= 0} is the constraint.
// `grad` is the gradient in the trapezoid inner product; absent for the
// nonsmooth sup-distance form. `eval_t` serves clock-dependent functionals;
// when unset, consumers fall back to eval on the state alone.
struct ConstraintFunctional {
  ConstraintKind kind = ConstraintKind::custom;
  std::function<double(const GridFunction&)> eval;
  std::function<GridFunction(const GridFunction&)> grad;
  std::function<double(double, const GridFunction&)> eval_t;
};

// 0.5 * trapezoid integral of (u - m)_-^2; zero exactly when u >= m nodewise.
ConstraintFunctional quad_lower_obstacle(const GridFunction& m);
// 0.5 * trapezoid integral of (u - M)_+^2; zero exactly when u <= M nodewise.
ConstraintFunctional quad_upper_obstacle(const GridFunction& M);
// sup norm of (u - m)_-, the sup distance to the upper set {u >= m}.
ConstraintFunctional sup_distance_lower(const GridFunction& m);
// V(t, x) = tau(x) - t; the sublevel set is the epigraph of tau.
ConstraintFunctional epigraph(std::function<double(const GridFunction&)> tau);
ConstraintFunctional custom_constraint(std::function<double(const GridFunction&)> eval,
                                       std::function<GridFunction(const GridFunction&)> grad = {});

double default_exit_tol(ConstraintKind kind);

}  // namespace semiflow
