#include "semiflow/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "semiflow/conditions.hpp"
#include "semiflow/constraint.hpp"
#include "semiflow/emit.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/impulsive.hpp"
#include "semiflow/invariance.hpp"
#include "semiflow/stepping.hpp"

namespace semiflow {

bool RunReport::ok() const {
  return conditions.verdict == Verdict::certified && pointwise.verdict == Verdict::certified &&
         !first_exit && violations.empty() && !blew_up;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const RunOptions& opts, const std::string& name, const char* suffix) {
  return opts.out_dir + "/" + name + suffix;
}

void summarize_obstacles(const Problem& pb, const Trajectory& traj, RunReport& rep,
                         const RunOptions& opts) {
  rep.min_u_minus_m = kNaN;
  rep.max_u_minus_M = kNaN;
  rep.v_lower_max = rep.v_lower_final = kNaN;
  rep.v_upper_max = rep.v_upper_final = kNaN;

  std::vector<std::vector<double>> v_columns;
  std::vector<std::vector<double>> margin_columns;

  if (pb.m) {
    const ConstraintFunctional V = quad_lower_obstacle(*pb.m);
    const MonitorReport mon = monitor(traj, V, default_exit_tol(V.kind));
    rep.v_lower_max = *std::max_element(mon.v_series.begin(), mon.v_series.end());
    rep.v_lower_final = mon.v_series.back();
    if (mon.first_exit) rep.first_exit = mon.first_exit;

    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> margins;
    margins.reserve(traj.size());
    for (const GridFunction& u : traj.states) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < u.size(); ++i) m = std::min(m, u[i] - (*pb.m)[i]);
      margins.push_back(m);
      worst = std::min(worst, m);
    }
    rep.min_u_minus_m = worst;
    v_columns.push_back(mon.v_series);
    margin_columns.push_back(std::move(margins));
  }

  if (pb.M) {
    const ConstraintFunctional V = quad_upper_obstacle(*pb.M);
    const MonitorReport mon = monitor(traj, V, default_exit_tol(V.kind));
    rep.v_upper_max = *std::max_element(mon.v_series.begin(), mon.v_series.end());
    rep.v_upper_final = mon.v_series.back();
    if (mon.first_exit && (!rep.first_exit || *mon.first_exit < *rep.first_exit))
      rep.first_exit = mon.first_exit;

    double worst = -std::numeric_limits<double>::infinity();
    std::vector<double> margins;
    margins.reserve(traj.size());
    for (const GridFunction& u : traj.states) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, u[i] - (*pb.M)[i]);
      margins.push_back(m);
      worst = std::max(worst, m);
    }
    rep.max_u_minus_M = worst;
    v_columns.push_back(mon.v_series);
    margin_columns.push_back(std::move(margins));
  }

  if (!opts.out_dir.empty() && !v_columns.empty()) {
    const std::string v_path = out_path(opts, rep.name, "_v.csv");
    emit_csv(traj.times, v_columns, v_path);
    rep.files.push_back(v_path);
    const std::string m_path = out_path(opts, rep.name, "_margins.csv");
    emit_csv(traj.times, margin_columns, m_path);
    rep.files.push_back(m_path);
    if (opts.svg) {
      const std::string svg_path = out_path(opts, rep.name, "_v.svg");
      emit_svg(traj.times, v_columns.front(), svg_path, pb.m ? "V_m" : "V_M");
      rep.files.push_back(svg_path);
    }
  }
}

void write_scalar_series(const Trajectory& traj, RunReport& rep, const RunOptions& opts) {
  if (opts.out_dir.empty()) return;
  std::vector<double> u_series;
  u_series.reserve(traj.size());
  for (const GridFunction& u : traj.states) u_series.push_back(u.scalar_value());
  const std::string u_path = out_path(opts, rep.name, "_u.csv");
  emit_csv(traj.times, {u_series}, u_path);
  rep.files.push_back(u_path);
  if (opts.svg) {
    const std::string svg_path = out_path(opts, rep.name, "_u.svg");
    emit_svg(traj.times, u_series, svg_path, "u");
    rep.files.push_back(svg_path);
  }
}

}  // namespace

RunReport run_scenario(const Scenario& scenario, const RunOptions& opts) {
  Scenario s = scenario;
  if (opts.seed) s.seed = *opts.seed;
  if (opts.steps) {
    if (*opts.steps < 1) throw ConfigError("steps override must be at least 1");
    s.steps = *opts.steps;
  }

  const Problem pb = build_problem(s);

  RunReport rep;
  rep.name = s.name;
  rep.min_u_minus_m = kNaN;
  rep.max_u_minus_M = kNaN;
  rep.v_lower_max = rep.v_lower_final = kNaN;
  rep.v_upper_max = rep.v_upper_final = kNaN;

  rep.conditions = verify_problem_conditions(pb);
  rep.pointwise = run_pointwise_checks(pb);

  if (!opts.out_dir.empty()) std::filesystem::create_directories(opts.out_dir);

  if (s.kind == ProblemKind::impulsive) {
    const ImpulsiveResult sim =
        simulate_impulsive(pb.op, pb.forcing, pb.barriers, pb.x0, s.T, s.steps);
    rep.hit_counts = sim.hit_counts;
    rep.violations = sim.violations;
    rep.blew_up = sim.blew_up;
    rep.blowup_time = sim.blowup_time;
    for (const JumpRecord& j : sim.jumps) rep.event_times.push_back(j.time);
    write_scalar_series(sim.trajectory, rep, opts);
    return rep;
  }

  const MarchResult sim = solve_integral(pb.op, pb.forcing, pb.x0, s.T, s.steps);
  rep.blew_up = sim.blew_up;
  rep.blowup_time = sim.blowup_time;

  if (s.kind == ProblemKind::custom_linear) {
    write_scalar_series(sim.trajectory, rep, opts);
    return rep;
  }

  summarize_obstacles(pb, sim.trajectory, rep, opts);
  return rep;
}

}  // namespace semiflow
