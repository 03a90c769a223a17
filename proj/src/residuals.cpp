#include "semiflow/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "semiflow/bracket.hpp"
#include "semiflow/errors.hpp"

namespace semiflow {

namespace {

// max over s <= t of phi(t) - phi(s) where phi = decay-weighted gap minus the
// cumulative integral; a running minimum makes the pair scan linear.
double worst_pair_gap(const std::vector<double>& phi) {
  double run_min = phi[0];
  double worst = 0.0;
  for (double v : phi) {
    run_min = std::min(run_min, v);
    worst = std::max(worst, v - run_min);
  }
  return worst;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                         const std::vector<double>& g) {
  std::vector<double> acc(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k)
    acc[k] = acc[k - 1] + 0.5 * (t[k] - t[k - 1]) * (g[k] + g[k - 1]);
  return acc;
}

void require_shared_grid(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size())
    throw PreconditionError("residual: trajectories sample different numbers of times");
  for (std::size_t k = 0; k < a.times.size(); ++k)
    if (std::fabs(a.times[k] - b.times[k]) > 1e-12 * (1.0 + std::fabs(a.times[k])))
      throw PreconditionError("residual: trajectories sample different time grids");
}

}  // namespace

double benilan_residual(const Trajectory& u1, const Trajectory& u2, double alpha) {
  if (u1.times.empty() || u2.times.empty())
    throw PreconditionError("benilan_residual: empty trajectory");
  require_shared_grid(u1, u2);

  std::size_t n = u1.times.size();
  std::vector<double> gap(n), rate(n);
  for (std::size_t k = 0; k < n; ++k) {
    double decay = std::exp(-alpha * u1.times[k]);
    gap[k] = decay * (u1.states[k] - u2.states[k]).norm();
    rate[k] = decay * (u1.forcings[k] - u2.forcings[k]).norm();
  }
  std::vector<double> integral = cumulative_trapezoid(u1.times, rate);
  std::vector<double> phi(n);
  for (std::size_t k = 0; k < n; ++k) phi[k] = gap[k] - integral[k];
  return worst_pair_gap(phi);
}

double integral_inequality_residual(
    const Trajectory& u, const std::vector<std::pair<GridFunction, GridFunction>>& graph,
    double alpha) {
  if (u.times.empty()) throw PreconditionError("integral_inequality_residual: empty trajectory");
  if (graph.empty())
    throw PreconditionError("integral_inequality_residual: no graph pairs supplied");

  std::size_t n = u.times.size();
  double worst = 0.0;
  std::vector<double> gap(n), rate(n), phi(n);
  for (const auto& [y, v] : graph) {
    for (std::size_t k = 0; k < n; ++k) {
      double decay = std::exp(-alpha * u.times[k]);
      GridFunction diff = u.states[k] - y;
      gap[k] = decay * diff.norm();
      rate[k] = decay * bracket(diff, u.forcings[k] - v, BracketSide::plus);
    }
    std::vector<double> integral = cumulative_trapezoid(u.times, rate);
    for (std::size_t k = 0; k < n; ++k) phi[k] = gap[k] - integral[k];
    worst = std::max(worst, worst_pair_gap(phi));
  }
  return worst;
}

}  // namespace semiflow
