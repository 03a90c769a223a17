#include "semiflow/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "semiflow/errors.hpp"
#include "semiflow/stepping.hpp"

namespace semiflow {

std::vector<double> default_h_schedule() {
  std::vector<double> schedule;
  double h = 1e-2;
  for (int k = 0; k <= 8; ++k) {
    schedule.push_back(h);
    h *= 0.5;
  }
  return schedule;
}

ADerivativeResult a_derivative(const ResolventOracle& op, const ConstraintFunctional& V,
                               const GridFunction& x, const GridFunction& v,
                               const std::vector<double>& h_schedule) {
  if (h_schedule.empty()) throw PreconditionError("a_derivative: empty h schedule");
  if (!V.eval) throw PreconditionError("a_derivative: constraint lacks eval");
  require_compatible(x, v, "a_derivative");

  const double vx = V.eval(x);
  ADerivativeResult result;
  result.value = std::numeric_limits<double>::infinity();
  for (double h : h_schedule) {
    require_lambda(op, h, "a_derivative");
    const GridFunction u1 = op.resolve(h, axpy(x, h, v));
    const double q1 = (V.eval(u1) - vx) / h;

    const GridFunction half = op.resolve(0.5 * h, axpy(x, 0.5 * h, v));
    const GridFunction u2 = op.resolve(0.5 * h, axpy(half, 0.5 * h, v));
    const double q2 = (V.eval(u2) - vx) / h;

    result.h_used.push_back(h);
    result.quotients.push_back(q1);
    result.refined.push_back(q2);
    result.value = std::min(result.value, q1);
  }
  const double q1_last = result.quotients.back();
  const double q2_last = result.refined.back();
  result.error_bound = std::abs(result.value - q1_last) + 3.0 * std::abs(q1_last - q2_last) +
                       1e-6 * (1.0 + std::abs(result.value));
  return result;
}

CertReport check_pointwise_condition(const ResolventOracle& op, const StateMap& f,
                                     const ConstraintFunctional& V, const OmegaFunction& omega,
                                     const std::vector<GridFunction>& samples, Region region,
                                     double boundary_band) {
  CertReport report;
  if (!V.grad) {
    report.verdict = Verdict::inconclusive;
    report.reason = "constraint functional has no gradient";
    return report;
  }
  if (!op.apply) {
    report.verdict = Verdict::inconclusive;
    report.reason = "operator has no direct application";
    return report;
  }

  int retained = 0;
  int skipped = 0;
  double worst_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const GridFunction& x = samples[i];
    const double vx = V.eval(x);
    bool in_region = false;
    double arg = 0.0;
    switch (region) {
      case Region::outside_K:
        in_region = vx > 0.0;
        arg = vx;
        break;
      case Region::inside_K0:
        in_region = vx < 0.0;
        arg = -vx;
        break;
      case Region::near_boundary:
        in_region = std::abs(vx) <= boundary_band;
        arg = std::abs(vx);
        break;
    }
    if (!in_region) {
      ++skipped;
      continue;
    }
    ++retained;
    const double lhs = trap_inner(V.grad(x), f(x) - op.apply(x));
    const double rhs = omega(arg);
    worst_slack = std::max(worst_slack, lhs - rhs);
    if (lhs > rhs + 1e-9 * (1.0 + std::abs(rhs))) {
      report.witnesses.push_back({"sample " + std::to_string(i), lhs, rhs});
    }
  }
  report.stats["samples_checked"] = retained;
  report.stats["samples_skipped"] = skipped;
  if (retained > 0) report.stats["worst_slack"] = worst_slack;
  if (retained == 0) {
    report.verdict = Verdict::inconclusive;
    report.reason = "no samples fell in the requested region";
  } else if (!report.witnesses.empty()) {
    report.verdict = Verdict::violated;
  } else {
    report.verdict = Verdict::certified;
  }
  return report;
}

MonitorReport monitor(const Trajectory& traj, const ConstraintFunctional& V, double exit_tol) {
  if (!V.eval && !V.eval_t) throw PreconditionError("monitor: constraint lacks eval");
  MonitorReport report;
  const std::size_t n = traj.states.size();
  report.v_series.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double value = V.eval_t ? V.eval_t(traj.times[k], traj.states[k])
                                  : V.eval(traj.states[k]);
    report.v_series.push_back(value);
    if (!report.first_exit && value > exit_tol) report.first_exit = traj.times[k];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double dt = traj.times[k + 1] - traj.times[k];
    report.dini_series.push_back(
        dt > 0.0 ? (report.v_series[k + 1] - report.v_series[k]) / dt : 0.0);
  }
  return report;
}

std::vector<double> default_slow_grid() {
  // 61 geometric points from 1 down to 1e-6.
  std::vector<double> grid;
  const double ratio = std::pow(10.0, -0.1);
  double x = 1.0;
  for (int k = 0; k <= 60; ++k) {
    grid.push_back(x);
    x *= ratio;
  }
  return grid;
}

CertReport certify_slow(const std::function<double(double)>& beta, double gamma,
                        const std::vector<double>& eps_grid) {
  if (!beta) throw PreconditionError("certify_slow: missing function");
  if (!(gamma > 0.0)) throw PreconditionError("certify_slow: gamma must be positive");
  if (eps_grid.empty()) throw PreconditionError("certify_slow: empty grid");

  CertReport report;
  report.verdict = Verdict::certified;
  double min_quotient = std::numeric_limits<double>::infinity();
  for (double x : eps_grid) {
    if (!(x > 0.0)) throw PreconditionError("certify_slow: grid points must be positive");
    const double bx = beta(x);
    const double quotient =
        bx > 0.0 ? x / bx : std::numeric_limits<double>::infinity();
    min_quotient = std::min(min_quotient, quotient);
    if (!(quotient > gamma)) {
      report.verdict = Verdict::violated;
      report.witnesses.push_back({"x = " + std::to_string(x), quotient, gamma});
    }
  }
  report.stats["min_quotient"] = min_quotient;
  report.stats["M"] = 2.0;
  report.stats["tau"] = 0.5 * gamma;
  return report;
}

}  // namespace semiflow
