#pragma once

#include <functional>
#include <optional>

#include "semiflow/resolvent_oracle.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow {

using Forcing = std::function<GridFunction(double, const GridFunction&)>;

Forcing zero_forcing();

// One implicit Euler step of u' + A u = v: returns resolve(h, u_prev + h v).
GridFunction implicit_euler_step(const ResolventOracle& op, double h, const GridFunction& u_prev,
                                 const GridFunction& v);

// Exponential formula iterate J_{t/n}^n x; t = 0 returns x unchanged.
GridFunction crandall_liggett(const ResolventOracle& op, const GridFunction& x, double t, int n);

struct PicardOptions {
  bool enabled = false;
  int max_iter = 30;
  double tol = 1e-12;
};

struct MarchOptions {
  PicardOptions picard;
  double blowup_ceiling = 1e8;
};

struct MarchResult {
  Trajectory trajectory;
  bool blew_up = false;
  double blowup_time = 0.0;
};

// Marches u' + A u = f(t, u), u(0) = x0 to time T on a uniform grid of
// `steps` implicit Euler steps. Default scheme is semi-implicit (forcing
// frozen at the step's left endpoint); Picard iteration refines each step
// toward the fully implicit value when enabled, falling back to the
// semi-implicit value if it stalls (flagged in step_meta).
//
// Quasi-accretive operators (alpha != 0) are marched through the shifted
// accretive operator A + alpha I with forcing alpha u + f(t, u), one resolvent
// code path for every operator.
//
// Aborts with blew_up when the state norm passes opts.blowup_ceiling or an
// intermediate value stops being finite; the trajectory holds the prefix.
MarchResult solve_integral(const ResolventOracle& op, const Forcing& f, const GridFunction& x0,
                           double T, int steps, const MarchOptions& opts = {});

namespace detail {

// Resolvent of the shifted operator A + alpha I, derived from the resolvent
// of A: J^{A+aI}_h(y) = J^A_{h/(1+ah)}(y / (1+ah)).
GridFunction resolve_shifted(const ResolventOracle& op, double h, const GridFunction& y);

// One semi-implicit step from state u at time t; shared by solve_integral and
// the impulsive event loop so that barrier-free runs coincide bit for bit.
GridFunction march_step(const ResolventOracle& op, double h, double t, const GridFunction& u,
                        const Forcing& f);

}  // namespace detail

}  // namespace semiflow
