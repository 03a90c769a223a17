#include "semiflow/constraint.hpp"

#include <algorithm>
#include <utility>

#include "semiflow/errors.hpp"

namespace semiflow {
namespace {

double neg_part(double s) { return std::max(-s, 0.0); }
double pos_part(double s) { return std::max(s, 0.0); }

}  // namespace

ConstraintFunctional quad_lower_obstacle(const GridFunction& m) {
  ConstraintFunctional V;
  V.kind = ConstraintKind::quad_lower_obstacle;
  V.eval = [m](const GridFunction& u) {
    require_compatible(u, m, "quad_lower_obstacle");
    const GridFunction neg = (u - m).map(neg_part);
    return 0.5 * trap_integral(neg.map([](double s) { return s * s; }));
  };
  V.grad = [m](const GridFunction& u) {
    require_compatible(u, m, "quad_lower_obstacle gradient");
    return (u - m).map([](double s) { return -neg_part(s); });
  };
  return V;
}

ConstraintFunctional quad_upper_obstacle(const GridFunction& M) {
  ConstraintFunctional V;
  V.kind = ConstraintKind::quad_upper_obstacle;
  V.eval = [M](const GridFunction& u) {
    require_compatible(u, M, "quad_upper_obstacle");
    const GridFunction pos = (u - M).map(pos_part);
    return 0.5 * trap_integral(pos.map([](double s) { return s * s; }));
  };
  V.grad = [M](const GridFunction& u) {
    require_compatible(u, M, "quad_upper_obstacle gradient");
    return (u - M).map(pos_part);
  };
  return V;
}

ConstraintFunctional sup_distance_lower(const GridFunction& m) {
  ConstraintFunctional V;
  V.kind = ConstraintKind::sup_distance_lower;
  V.eval = [m](const GridFunction& u) {
    require_compatible(u, m, "sup_distance_lower");
    return (u - m).map(neg_part).sup_norm();
  };
  return V;
}

ConstraintFunctional epigraph(std::function<double(const GridFunction&)> tau) {
  if (!tau) throw PreconditionError("epigraph: missing barrier function");
  ConstraintFunctional V;
  V.kind = ConstraintKind::epigraph;
  V.eval = [tau](const GridFunction& u) { return tau(u); };
  V.eval_t = [tau](double t, const GridFunction& u) { return tau(u) - t; };
  return V;
}

ConstraintFunctional custom_constraint(std::function<double(const GridFunction&)> eval,
                                       std::function<GridFunction(const GridFunction&)> grad) {
  if (!eval) throw PreconditionError("custom_constraint: missing functional");
  ConstraintFunctional V;
  V.kind = ConstraintKind::custom;
  V.eval = std::move(eval);
  V.grad = std::move(grad);
  return V;
}

double default_exit_tol(ConstraintKind kind) {
  return kind == ConstraintKind::sup_distance_lower ? 1e-6 : 1e-8;
}

}  // namespace semiflow
