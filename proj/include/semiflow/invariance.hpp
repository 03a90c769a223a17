#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "semiflow/cert_report.hpp"
#include "semiflow/constraint.hpp"
#include "semiflow/omega.hpp"
#include "semiflow/resolvent_oracle.hpp"
#include "semiflow/trajectory.hpp"

namespace semiflow {

// Rollout estimate of the A-directional Dini derivative of V at x along v:
// a single constant-forcing implicit step u(h) = resolve(h, x + h v) per
// schedule entry, refined once with two half steps. The value is the minimum
// difference quotient over the schedule; the bound combines the spread to
// the finest quotient with a Richardson-style estimate of its scheme error.
struct ADerivativeResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::vector<double> h_used;
  std::vector<double> quotients;
  std::vector<double> refined;
};

std::vector<double> default_h_schedule();

ADerivativeResult a_derivative(const ResolventOracle& op, const ConstraintFunctional& V,
                               const GridFunction& x, const GridFunction& v,
                               const std::vector<double>& h_schedule = default_h_schedule());

enum class Region { outside_K, inside_K0, near_boundary };

using StateMap = std::function<GridFunction(const GridFunction&)>;

// Evaluates <grad V(x), f(x) - A x> <= omega(arg) per sample, where arg is
// V(x) outside K, -V(x) inside the open kernel, |V(x)| near the boundary.
// Samples outside the requested region are skipped and counted.
CertReport check_pointwise_condition(const ResolventOracle& op, const StateMap& f,
                                     const ConstraintFunctional& V, const OmegaFunction& omega,
                                     const std::vector<GridFunction>& samples, Region region,
                                     double boundary_band = 1e-3);

struct MonitorReport {
  std::vector<double> v_series;
  std::optional<double> first_exit;
  std::vector<double> dini_series;  // forward quotients, one per step
};

MonitorReport monitor(const Trajectory& traj, const ConstraintFunctional& V,
                      double exit_tol);

std::vector<double> default_slow_grid();

// Certifies liminf x / beta(x) > 0 by the quotient staying above gamma on
// the sample grid; a certified beta admits the Gronwall-type constants
// (M, tau) = (2, gamma/2), recorded in the stats.
CertReport certify_slow(const std::function<double(double)>& beta, double gamma,
                        const std::vector<double>& eps_grid = default_slow_grid());

}  // namespace semiflow
