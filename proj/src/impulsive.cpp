#include "semiflow/impulsive.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "semiflow/errors.hpp"

namespace semiflow {
namespace {

std::string describe(double t) {
  return "t = " + std::to_string(t);
}

}  // namespace

ImpulsiveResult simulate_impulsive(const ResolventOracle& op, const Forcing& f,
                                   const std::vector<Barrier>& barriers, const GridFunction& x0,
                                   double T, int steps, const MarchOptions& opts) {
  if (barriers.empty()) {
    MarchResult plain = solve_integral(op, f, x0, T, steps, opts);
    ImpulsiveResult result;
    result.trajectory = std::move(plain.trajectory);
    result.blew_up = plain.blew_up;
    result.blowup_time = plain.blowup_time;
    return result;
  }
  if (!(T > 0.0)) throw PreconditionError("simulate_impulsive: horizon must be positive");
  if (steps < 1) throw PreconditionError("simulate_impulsive: needs at least one step");
  for (const Barrier& b : barriers) {
    if (!b.tau || !b.impulse) {
      throw PreconditionError("simulate_impulsive: barrier lacks tau or impulse");
    }
  }
  const Forcing forcing = f ? f : zero_forcing();

  ImpulsiveResult result;
  result.hit_counts.assign(barriers.size(), 0);
  std::vector<bool> exit_reported(barriers.size(), false);

  double t = 0.0;
  GridFunction u = x0;
  std::vector<double> prev_v(barriers.size());
  for (std::size_t j = 0; j < barriers.size(); ++j) prev_v[j] = barriers[j].tau(u) - t;

  Trajectory& traj = result.trajectory;
  const auto record = [&](double time, const GridFunction& state) {
    traj.times.push_back(time);
    traj.states.push_back(state);
    traj.forcings.push_back(forcing(time, state));
    if (!traj.times.empty() && traj.states.size() > 1) traj.step_meta.push_back({});
  };
  record(0.0, u);

  const double h = T / steps;
  const auto after_state_update = [&](double time, const GridFunction& state) {
    // Once a barrier has been hit the trajectory must stay in its epigraph.
    for (std::size_t j = 0; j < barriers.size(); ++j) {
      prev_v[j] = barriers[j].tau(state) - time;
      if (result.hit_counts[j] >= 1 && !exit_reported[j] && prev_v[j] > 1e-9) {
        exit_reported[j] = true;
        result.violations.push_back("barrier " + std::to_string(j) +
                                    " epigraph exited at " + describe(time));
      }
    }
  };

  for (int k = 0; k < steps && !result.blew_up; ++k) {
    const double target = (k + 1 == steps) ? T : (k + 1) * h;
    bool committed = false;
    while (!committed) {
      const double remaining = target - t;
      if (remaining <= 1e-15 * (1.0 + T)) break;

      std::optional<GridFunction> next;
      try {
        next = detail::march_step(op, remaining, t, u, forcing);
      } catch (const NonFiniteError&) {
        result.blew_up = true;
        result.blowup_time = target;
        break;
      }

      // Lowest barrier index wins a tie within the same sub-step.
      std::optional<std::size_t> hit;
      for (std::size_t j = 0; j < barriers.size(); ++j) {
        if (prev_v[j] > 0.0 && barriers[j].tau(*next) - target <= 0.0) {
          hit = j;
          break;
        }
      }

      if (!hit) {
        u = *next;
        t = target;
        record(t, u);
        after_state_update(t, u);
        committed = true;
        break;
      }

      const Barrier& barrier = barriers[*hit];
      double lo = 0.0;
      double hi = remaining;
      GridFunction at_hi = *next;
      for (int bisection = 0; bisection < 40; ++bisection) {
        const double mid = 0.5 * (lo + hi);
        GridFunction at_mid = detail::march_step(op, mid, t, u, forcing);
        if (barrier.tau(at_mid) - (t + mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
          at_hi = std::move(at_mid);
        }
      }
      const double event_time = t + hi;
      const double tau_before = barrier.tau(at_hi);
      const GridFunction after = at_hi + barrier.impulse(at_hi);
      const double tau_after = barrier.tau(after);

      ++result.hit_counts[*hit];
      if (result.hit_counts[*hit] > 1) {
        result.violations.push_back("barrier " + std::to_string(*hit) +
                                    " hit more than once at " + describe(event_time));
      }
      if (tau_after - event_time > 1e-9) {
        result.violations.push_back("barrier " + std::to_string(*hit) +
                                    " post-jump state left the epigraph at " +
                                    describe(event_time));
      }
      result.jumps.push_back(
          JumpRecord{event_time, *hit, at_hi, after, tau_before, tau_after});

      u = after;
      t = event_time;
      record(t, u);
      after_state_update(t, u);
    }
    if (!result.blew_up && u.norm() > opts.blowup_ceiling) {
      result.blew_up = true;
      result.blowup_time = t;
    }
  }
  return result;
}

}  // namespace semiflow
