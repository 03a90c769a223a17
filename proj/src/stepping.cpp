#include "semiflow/stepping.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "semiflow/errors.hpp"

namespace semiflow {

Forcing zero_forcing() {
  return [](double, const GridFunction& u) { return 0.0 * u; };
}

void require_lambda(const ResolventOracle& op, double lambda, const char* where) {
  if (!(lambda > 0.0))
    throw PreconditionError(std::string(where) + ": lambda must be positive, got " +
                            std::to_string(lambda));
  if (lambda > op.lambda_max)
    throw PreconditionError(std::string(where) + ": lambda " + std::to_string(lambda) +
                            " exceeds the operator's lambda_max " + std::to_string(op.lambda_max));
  if (lambda * op.alpha >= 1.0)
    throw PreconditionError(std::string(where) + ": lambda * alpha = " +
                            std::to_string(lambda * op.alpha) + " must stay below 1");
}

GridFunction yosida(const ResolventOracle& op, double lambda, const GridFunction& x) {
  require_lambda(op, lambda, "yosida");
  return (1.0 / lambda) * (x - op.resolve(lambda, x));
}

GridFunction implicit_euler_step(const ResolventOracle& op, double h, const GridFunction& u_prev,
                                 const GridFunction& v) {
  require_lambda(op, h, "implicit_euler_step");
  return op.resolve(h, axpy(u_prev, h, v));
}

GridFunction crandall_liggett(const ResolventOracle& op, const GridFunction& x, double t, int n) {
  if (t < 0.0) throw PreconditionError("crandall_liggett: t must be nonnegative");
  if (n < 1) throw PreconditionError("crandall_liggett: n must be at least 1");
  if (t == 0.0) return x;
  double lambda = t / n;
  require_lambda(op, lambda, "crandall_liggett");
  GridFunction u = x;
  for (int k = 0; k < n; ++k) u = op.resolve(lambda, u);
  return u;
}

namespace detail {

GridFunction resolve_shifted(const ResolventOracle& op, double h, const GridFunction& y) {
  if (op.alpha == 0.0) {
    require_lambda(op, h, "march");
    return op.resolve(h, y);
  }
  double scale = 1.0 + h * op.alpha;
  if (!(scale > 0.0))
    throw PreconditionError("march: step " + std::to_string(h) +
                            " too large for alpha = " + std::to_string(op.alpha));
  double mu = h / scale;
  require_lambda(op, mu, "march");
  return op.resolve(mu, (1.0 / scale) * y);
}

GridFunction march_step(const ResolventOracle& op, double h, double t, const GridFunction& u,
                        const Forcing& f) {
  GridFunction g = f(t, u);
  if (op.alpha != 0.0) g = axpy(g, op.alpha, u);
  return resolve_shifted(op, h, axpy(u, h, g));
}

}  // namespace detail

MarchResult solve_integral(const ResolventOracle& op, const Forcing& f, const GridFunction& x0,
                           double T, int steps, const MarchOptions& opts) {
  if (!(T > 0.0)) throw PreconditionError("solve_integral: T must be positive");
  if (steps < 1) throw PreconditionError("solve_integral: steps must be at least 1");

  MarchResult result;
  Trajectory& traj = result.trajectory;
  double h = T / steps;

  GridFunction u = x0;
  double t = 0.0;
  traj.times.push_back(0.0);
  traj.states.push_back(u);
  traj.forcings.push_back(f(0.0, u));

  while (t < T - 0.5 * h) {
    double hstep = std::min(h, T - t);
    StepMeta meta;
    std::optional<GridFunction> next;
    std::optional<GridFunction> forcing_next;
    try {
      next = detail::march_step(op, hstep, t, u, f);
      if (opts.picard.enabled) {
        GridFunction iterate = *next;
        bool converged = false;
        int j = 0;
        for (; j < opts.picard.max_iter; ++j) {
          GridFunction g = f(t + hstep, iterate);
          if (op.alpha != 0.0) g = axpy(g, op.alpha, iterate);
          GridFunction refined = detail::resolve_shifted(op, hstep, axpy(u, hstep, g));
          double change = (refined - iterate).sup_norm();
          iterate = refined;
          if (change < opts.picard.tol) {
            converged = true;
            ++j;
            break;
          }
        }
        meta.inner_iterations = j;
        meta.picard_converged = converged;
        if (converged) next = iterate;
      }
      forcing_next = f(t + hstep, *next);
    } catch (const NonFiniteError&) {
      result.blew_up = true;
      result.blowup_time = t + hstep;
      return result;
    }

    t += hstep;
    meta.increment_norm = (*next - u).norm();
    u = *next;
    traj.times.push_back(t);
    traj.states.push_back(u);
    traj.forcings.push_back(*forcing_next);
    traj.step_meta.push_back(meta);

    if (u.norm() > opts.blowup_ceiling) {
      result.blew_up = true;
      result.blowup_time = t;
      return result;
    }
  }
  return result;
}

}  // namespace semiflow
