#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "semiflow/omega.hpp"
#include "semiflow/operators.hpp"
#include "semiflow/stepping.hpp"

namespace semiflow {

struct ScalarTrajectory {
  std::vector<double> times;
  std::vector<double> values;
};

// Separable reference solution of the Dirichlet heat equation:
// sum of c_k exp(-(k pi / l)^2 t) sin(k pi x / l) sampled on `grid`.
struct HeatMode {
  int k = 1;
  double coefficient = 1.0;
};
GridFunction heat_spectral(const std::vector<HeatMode>& modes, double l, double t,
                           const Geometry& grid);
// Principal Dirichlet eigenvalue (pi/l)^2 of the continuous problem.
double heat_lambda1(double l);

ScalarTrajectory rk4_scalar(const std::function<double(double, double)>& rhs, double x0,
                            double T, int steps);

// Maximal-solution estimate for x' = omega(x), x(0) = x0, built from the
// lifted problems y' = omega(y) + eps, y(0) = x0 + eps on a decreasing eps
// schedule. The pointwise family is monotone in eps (asserted); the returned
// values extrapolate the final iterates, which removes the O(sqrt(eps))
// lift bias that the last iterate alone retains.
struct PerronResult {
  ScalarTrajectory estimate;
  std::vector<ScalarTrajectory> lifted;  // one per schedule entry
  bool truncated = false;                // a lifted solution diverged before T
  double time_reached = 0.0;
};
std::vector<double> default_eps_schedule();
PerronResult perron_max_solution(const OmegaFunction& omega, double x0, double T,
                                 const std::vector<double>& eps_schedule = default_eps_schedule(),
                                 int rk4_steps = 4000);

// Pointwise domination u <= x_max + 1e-9 on a shared time grid. The
// comparison function identifies the scalar problem the majorant solves;
// the discrete verdict needs only the two trajectories.
struct ComparisonResult {
  bool dominated = true;
  std::optional<std::size_t> witness_index;
  double worst_gap = 0.0;  // max(u - x_max)

  explicit operator bool() const { return dominated; }
};
ComparisonResult comparison_check(const ScalarTrajectory& u, const OmegaFunction& omega,
                                  const ScalarTrajectory& x_max);

// Brute-force forward-Euler flux-form march on a `refine`-times finer grid,
// restricted back to the coarse grid of `spec` at the requested output
// times. The time step obeys the explicit stability bound
//   dt <= hx^2 / (2 (p-1) max|Du|^{p-2} + 1),
// recomputed every step.
struct ExplicitResult {
  Trajectory trajectory;
  bool aborted = false;  // stability bound pushed dt below 1e-10
  double time_reached = 0.0;
};
ExplicitResult fine_explicit_plaplace(const PLaplaceSpec& spec, const Forcing& f,
                                      const GridFunction& x0,
                                      const std::vector<double>& output_times, int refine = 4);

}  // namespace semiflow
