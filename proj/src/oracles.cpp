#include "semiflow/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "semiflow/errors.hpp"

namespace semiflow {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDivergenceCeiling = 1e12;

}  // namespace

GridFunction heat_spectral(const std::vector<HeatMode>& modes, double l, double t,
                           const Geometry& grid) {
  if (grid.dim != 1) throw GeometryError("heat_spectral: 1D grids only");
  if (!(l > 0.0)) throw PreconditionError("heat_spectral: length must be positive");
  const int n = grid.nodes[0];
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const HeatMode& mode : modes) {
    const double freq = mode.k * kPi / l;
    const double decay = std::exp(-freq * freq * t);
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] +=
          mode.coefficient * decay * std::sin(freq * grid.coord(0, i));
    }
  }
  if (grid.boundary == BoundaryKind::dirichlet_zero) {
    out.front() = 0.0;
    out.back() = 0.0;
  }
  return GridFunction(grid, std::move(out));
}

double heat_lambda1(double l) { return (kPi / l) * (kPi / l); }

ScalarTrajectory rk4_scalar(const std::function<double(double, double)>& rhs, double x0,
                            double T, int steps) {
  if (steps < 1) throw PreconditionError("rk4_scalar: needs at least one step");
  if (!(T > 0.0)) throw PreconditionError("rk4_scalar: horizon must be positive");
  ScalarTrajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.values.reserve(static_cast<std::size_t>(steps) + 1);
  const double h = T / steps;
  double x = x0;
  traj.times.push_back(0.0);
  traj.values.push_back(x);
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const double k1 = rhs(t, x);
    const double k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = rhs(t + h, x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.times.push_back((k + 1) * h);
    traj.values.push_back(x);
  }
  return traj;
}

std::vector<double> default_eps_schedule() {
  return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
}

PerronResult perron_max_solution(const OmegaFunction& omega, double x0, double T,
                                 const std::vector<double>& eps_schedule, int rk4_steps) {
  if (x0 < 0.0) throw PreconditionError("perron_max_solution: x0 must be nonnegative");
  if (eps_schedule.empty()) throw PreconditionError("perron_max_solution: empty eps schedule");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0) ||
        (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))) {
      throw PreconditionError("perron_max_solution: eps schedule must decrease and stay positive");
    }
  }

  PerronResult result;
  std::size_t valid_len = static_cast<std::size_t>(rk4_steps) + 1;
  for (double eps : eps_schedule) {
    ScalarTrajectory lifted = rk4_scalar(
        [&omega, eps](double, double y) { return omega(std::max(y, 0.0)) + eps; }, x0 + eps, T,
        rk4_steps);
    for (std::size_t i = 0; i < lifted.values.size(); ++i) {
      if (!std::isfinite(lifted.values[i]) || std::abs(lifted.values[i]) > kDivergenceCeiling) {
        valid_len = std::min(valid_len, i);
        result.truncated = true;
        break;
      }
    }
    result.lifted.push_back(std::move(lifted));
  }
  if (valid_len < 2) {
    throw SolverError("perron_max_solution: lifted solutions diverge immediately",
                      kDivergenceCeiling, 0);
  }
  for (auto& lifted : result.lifted) {
    lifted.times.resize(valid_len);
    lifted.values.resize(valid_len);
  }

  for (std::size_t j = 1; j < result.lifted.size(); ++j) {
    const auto& coarse = result.lifted[j - 1];
    const auto& fine = result.lifted[j];
    for (std::size_t i = 0; i < valid_len; ++i) {
      if (fine.values[i] > coarse.values[i] + 1e-9 * (1.0 + std::abs(coarse.values[i]))) {
        throw SolverError("perron_max_solution: lifted family is not monotone in eps",
                          fine.values[i] - coarse.values[i], static_cast<int>(j));
      }
    }
  }

  result.estimate.times = result.lifted.back().times;
  result.estimate.values.resize(valid_len);
  const std::size_t count = result.lifted.size();
  for (std::size_t i = 0; i < valid_len; ++i) {
    const double last = result.lifted[count - 1].values[i];
    double limit = last;
    if (count >= 3) {
      const double d1 =
          result.lifted[count - 2].values[i] - result.lifted[count - 3].values[i];
      const double d2 = last - result.lifted[count - 2].values[i];
      // Geometric-tail extrapolation; falls back to the last iterate when the
      // ratio is degenerate or the decrements change sign.
      if (d2 != 0.0 && d1 * d2 > 0.0) {
        const double rho = d1 / d2;
        if (rho > 1.2) limit = last + d2 / (rho - 1.0);
      }
    }
    result.estimate.values[i] = limit;
  }
  result.time_reached = result.estimate.times.back();
  return result;
}

ComparisonResult comparison_check(const ScalarTrajectory& u, const OmegaFunction&,
                                  const ScalarTrajectory& x_max) {
  if (u.times.size() != x_max.times.size() || u.times.size() != u.values.size()) {
    throw PreconditionError("comparison_check: trajectories must share the time grid");
  }
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    if (std::abs(u.times[i] - x_max.times[i]) > 1e-12 * (1.0 + std::abs(u.times[i]))) {
      throw PreconditionError("comparison_check: trajectories must share the time grid");
    }
  }
  ComparisonResult result;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double gap = u.values[i] - x_max.values[i];
    result.worst_gap = std::max(result.worst_gap, gap);
    if (gap > 1e-9 && !result.witness_index) {
      result.witness_index = i;
      result.dominated = false;
    }
  }
  return result;
}

ExplicitResult fine_explicit_plaplace(const PLaplaceSpec& spec, const Forcing& f,
                                      const GridFunction& x0,
                                      const std::vector<double>& output_times, int refine) {
  if (refine < 4) throw PreconditionError("fine_explicit_plaplace: refinement must be >= 4");
  if (output_times.empty()) {
    throw PreconditionError("fine_explicit_plaplace: no output times requested");
  }
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (output_times[i] < 0.0 || (i > 0 && !(output_times[i] > output_times[i - 1]))) {
      throw PreconditionError("fine_explicit_plaplace: output times must increase");
    }
  }

  Geometry coarse;
  coarse.dim = 1;
  coarse.length = {spec.length, 0.0};
  coarse.nodes = {spec.interior_nodes + 2, 0};
  coarse.boundary = BoundaryKind::dirichlet_zero;
  coarse.norm_tag = spec.tag;
  if (!compatible(coarse, x0.geometry())) {
    throw GeometryError("fine_explicit_plaplace: x0 lives on a different grid");
  }

  const int nc = coarse.nodes[0];
  const int nf = refine * (nc - 1) + 1;
  Geometry fine = coarse;
  fine.nodes = {nf, 0};
  const double h = fine.spacing(0);
  const double p = spec.p;

  std::vector<double> u(static_cast<std::size_t>(nf));
  for (int j = 0; j < nf; ++j) {
    const int i0 = j / refine;
    const int rem = j % refine;
    if (rem == 0) {
      u[static_cast<std::size_t>(j)] = x0[static_cast<std::size_t>(i0)];
    } else {
      const double r = static_cast<double>(rem) / refine;
      u[static_cast<std::size_t>(j)] = (1.0 - r) * x0[static_cast<std::size_t>(i0)] +
                                       r * x0[static_cast<std::size_t>(i0) + 1];
    }
  }
  u.front() = 0.0;
  u.back() = 0.0;

  const auto phi = [p](double s) {
    if (p == 2.0) return s;
    if (s == 0.0) return 0.0;
    return std::pow(std::abs(s), p - 2.0) * s;
  };
  const auto restrict_to_coarse = [&]() {
    std::vector<double> vals(static_cast<std::size_t>(nc));
    for (int i = 0; i < nc; ++i) vals[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i) * refine];
    return GridFunction(coarse, std::move(vals));
  };

  ExplicitResult result;
  double t = 0.0;
  std::vector<double> flux(static_cast<std::size_t>(nf));
  for (double target : output_times) {
    while (t < target - 1e-14 && !result.aborted) {
      double max_slope = 0.0;
      for (int j = 1; j < nf; ++j) {
        const double d = (u[static_cast<std::size_t>(j)] - u[static_cast<std::size_t>(j) - 1]) / h;
        flux[static_cast<std::size_t>(j)] = phi(d);
        max_slope = std::max(max_slope, std::abs(d));
      }
      const double stiffness = 2.0 * (p - 1.0) * std::pow(max_slope, p - 2.0) + 1.0;
      const double dt_stable = h * h / stiffness;
      if (dt_stable < 1e-10) {
        result.aborted = true;
        break;
      }
      const double dt = std::min(dt_stable, target - t);

      std::vector<double> rhs(static_cast<std::size_t>(nf), 0.0);
      if (f) {
        const GridFunction forcing = f(t, GridFunction(fine, u));
        if (!compatible(forcing.geometry(), fine)) {
          throw GeometryError("fine_explicit_plaplace: forcing on the wrong grid");
        }
        rhs = forcing.values();
      }
      for (int j = 1; j + 1 < nf; ++j) {
        u[static_cast<std::size_t>(j)] +=
            dt * ((flux[static_cast<std::size_t>(j) + 1] - flux[static_cast<std::size_t>(j)]) / h +
                  rhs[static_cast<std::size_t>(j)]);
      }
      t += dt;
    }
    if (result.aborted) break;
    result.trajectory.times.push_back(target);
    result.trajectory.states.push_back(restrict_to_coarse());
  }
  result.time_reached = t;
  return result;
}

}  // namespace semiflow
