#include "semiflow/conditions.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "semiflow/constraint.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/invariance.hpp"
#include "semiflow/rng.hpp"

namespace semiflow {
namespace {

constexpr double kMarginTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

bool scalar_kind(ProblemKind k) {
  return k == ProblemKind::impulsive || k == ProblemKind::custom_linear;
}

std::function<double(double, double)> nodal_forcing(const Scenario& s) {
  if (s.f.empty()) {
    return [](double, double) { return 0.0; };
  }
  Expression f = s.f;
  return [f](double x, double u) {
    EvalEnv env;
    env.x = x;
    env.u = u;
    return f.eval(env);
  };
}

double node_x(const Geometry& g, int i) {
  return g.coord(0, g.dim == 2 ? i % g.nodes[0] : i);
}

// Nodes where the obstacle inequalities are read: interior nodes on Dirichlet
// grids, positive ages on the birth grid.
bool probe_node(const Geometry& g, int i) {
  if (g.boundary == BoundaryKind::dirichlet_zero) return !g.on_boundary(i);
  if (g.boundary == BoundaryKind::nonlocal_birth) return i > 0;
  return true;
}

std::string node_label(const Geometry& g, int i) {
  return "node " + std::to_string(i) + " (x = " + fmt(node_x(g, i)) + ")";
}

double dirichlet_lambda1(const Geometry& g) {
  const double pi = std::acos(-1.0);
  double sum = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const double h = g.spacing(a);
    sum += 2.0 / (h * h) * (1.0 - std::cos(pi * h / g.length[a]));
  }
  return sum;
}

double beta_l2_sq(const Problem& pb) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pb.beta_values.size(); ++i)
    sum += pb.geometry.quad_weight(static_cast<int>(i)) * pb.beta_values[i] * pb.beta_values[i];
  return sum;
}

}  // namespace

ProbeResult growth_probe(const Problem& pb, const GridFunction& obstacle, bool lower) {
  if (!pb.op.apply) throw PreconditionError("growth_probe: operator has no direct application");
  const Geometry& geom = pb.geometry;
  const GridFunction Ab = pb.op.apply(obstacle);
  const auto f_at = nodal_forcing(pb.scenario);

  ProbeResult out;
  out.l_emp = -kInf;
  for (int k = 2; k <= 6; ++k) {
    const double scale = std::pow(10.0, -k);
    const double s = lower ? -scale : scale;
    double best = -kInf;
    int best_node = -1;
    for (int i = 0; i < geom.total_nodes(); ++i) {
      if (!probe_node(geom, i)) continue;
      const double r = -Ab[i] + f_at(node_x(geom, i), obstacle[i] + s);
      const double q = r / s;
      if (q > best) {
        best = q;
        best_node = i;
      }
    }
    out.scales.push_back(scale);
    out.quotients.push_back(best);
    if (best > out.l_emp) {
      out.l_emp = best;
      out.worst_node = best_node;
    }
  }
  const auto& q = out.quotients;
  const double peak = *std::max_element(q.begin(), q.end());
  out.violated = (q[3] > 0.0 && q[4] >= 3.0 * q[3]) || peak > 1e8;
  return out;
}

namespace {

ConditionCheck probe_check(const std::string& name, const ProbeResult& probe,
                           const Geometry& geom) {
  ConditionCheck c;
  c.name = name;
  c.verdict = probe.violated ? Verdict::violated : Verdict::certified;
  c.stats["l_emp"] = probe.l_emp;
  for (std::size_t k = 0; k < probe.quotients.size(); ++k)
    c.stats["q_k" + std::to_string(k + 2)] = probe.quotients[k];
  if (probe.violated) {
    c.note = "quotients grow a decade per decade toward s = 0";
    c.witnesses.push_back({node_label(geom, probe.worst_node), probe.quotients.back(), 0.0});
  }
  return c;
}

void check_obstacle_conditions(const Problem& pb, CertReport& report) {
  const Geometry& geom = pb.geometry;
  const auto f_at = nodal_forcing(pb.scenario);
  const bool dirichlet = geom.boundary == BoundaryKind::dirichlet_zero;

  if (pb.m && pb.M) {
    ConditionCheck c;
    c.name = "obstacle-order";
    c.verdict = Verdict::certified;
    double min_gap = kInf;
    for (int i = 0; i < geom.total_nodes(); ++i) {
      const double gap = (*pb.M)[i] - (*pb.m)[i];
      min_gap = std::min(min_gap, gap);
      if (gap < -1e-12) {
        c.verdict = Verdict::violated;
        c.witnesses.push_back({node_label(geom, i), (*pb.m)[i], (*pb.M)[i]});
      }
    }
    c.stats["min_gap"] = min_gap;
    report.fold(c);
  }

  if (dirichlet) {
    ConditionCheck c;
    c.name = "boundary-compat";
    c.verdict = Verdict::certified;
    for (int i = 0; i < geom.total_nodes(); ++i) {
      if (!geom.on_boundary(i)) continue;
      if (pb.m && (*pb.m)[i] > 1e-12) {
        c.verdict = Verdict::violated;
        c.witnesses.push_back({node_label(geom, i) + ": m > 0 on the boundary", (*pb.m)[i], 0.0});
      }
      if (pb.M && (*pb.M)[i] < -1e-12) {
        c.verdict = Verdict::violated;
        c.witnesses.push_back({node_label(geom, i) + ": M < 0 on the boundary", 0.0, (*pb.M)[i]});
      }
    }
    report.fold(c);
  }

  if (pb.m) {
    const GridFunction Am = pb.op.apply(*pb.m);
    ConditionCheck c;
    c.name = "lower-subsolution";
    c.verdict = Verdict::certified;
    double margin = kInf;
    for (int i = 0; i < geom.total_nodes(); ++i) {
      if (!probe_node(geom, i)) continue;
      const double lhs = Am[i];
      const double rhs = f_at(node_x(geom, i), (*pb.m)[i]);
      margin = std::min(margin, rhs - lhs);
      if (lhs > rhs + kMarginTol) {
        c.verdict = Verdict::violated;
        if (c.witnesses.size() < 8) c.witnesses.push_back({node_label(geom, i), lhs, rhs});
      }
    }
    c.stats["margin"] = margin;
    report.fold(c);
    report.fold(probe_check("lower-growth-probe", growth_probe(pb, *pb.m, true), geom));
  }

  if (pb.M) {
    const GridFunction AM = pb.op.apply(*pb.M);
    ConditionCheck c;
    c.name = "upper-supersolution";
    c.verdict = Verdict::certified;
    double margin = kInf;
    for (int i = 0; i < geom.total_nodes(); ++i) {
      if (!probe_node(geom, i)) continue;
      const double lhs = f_at(node_x(geom, i), (*pb.M)[i]);
      const double rhs = AM[i];
      margin = std::min(margin, rhs - lhs);
      if (lhs > rhs + kMarginTol) {
        c.verdict = Verdict::violated;
        if (c.witnesses.size() < 8) c.witnesses.push_back({node_label(geom, i), lhs, rhs});
      }
    }
    c.stats["margin"] = margin;
    report.fold(c);
    report.fold(probe_check("upper-growth-probe", growth_probe(pb, *pb.M, false), geom));
  }

  {
    ConditionCheck c;
    c.name = "initial-between";
    c.verdict = Verdict::certified;
    for (int i = 0; i < geom.total_nodes(); ++i) {
      if (pb.m && pb.x0[i] < (*pb.m)[i] - 1e-12) {
        c.verdict = Verdict::violated;
        c.witnesses.push_back({node_label(geom, i) + ": x0 < m", pb.x0[i], (*pb.m)[i]});
      }
      if (pb.M && pb.x0[i] > (*pb.M)[i] + 1e-12) {
        c.verdict = Verdict::violated;
        c.witnesses.push_back({node_label(geom, i) + ": x0 > M", pb.x0[i], (*pb.M)[i]});
      }
    }
    report.fold(c);
  }
}

void check_birth_conditions(const Problem& pb, CertReport& report) {
  const Geometry& geom = pb.geometry;

  {
    ConditionCheck c;
    c.name = "birth-kernel";
    c.verdict = Verdict::certified;
    double mass = 0.0;
    for (std::size_t i = 0; i < pb.beta_values.size(); ++i) {
      const double b = pb.beta_values[i];
      mass += geom.quad_weight(static_cast<int>(i)) * b;
      if (b < 0.0) {
        c.verdict = Verdict::violated;
        c.witnesses.push_back({node_label(geom, static_cast<int>(i)) + ": beta < 0", b, 0.0});
      }
    }
    if (mass >= 1.0) {
      c.verdict = Verdict::violated;
      c.witnesses.push_back({"kernel mass", mass, 1.0});
    }
    c.stats["beta_mass"] = mass;
    report.fold(c);
  }

  auto closure_gap = [&](const GridFunction& u) {
    double birth = 0.0;
    for (int i = 0; i < geom.total_nodes(); ++i)
      birth += geom.quad_weight(i) * pb.beta_values[static_cast<std::size_t>(i)] * u[i];
    return u[0] - birth;
  };

  if (pb.m) {
    ConditionCheck c;
    c.name = "birth-compat";
    const double gap = closure_gap(*pb.m);
    const double tol = 1e-9 * (1.0 + std::abs((*pb.m)[0]));
    c.verdict = std::abs(gap) <= tol ? Verdict::certified : Verdict::violated;
    c.stats["closure_gap"] = gap;
    if (c.verdict == Verdict::violated)
      c.witnesses.push_back({"m(0) vs birth integral", (*pb.m)[0], (*pb.m)[0] - gap});
    report.fold(c);
  }

  {
    ConditionCheck c;
    c.name = "initial-admissible";
    const double gap = closure_gap(pb.x0);
    const double tol = 1e-9 * (1.0 + std::abs(pb.x0[0]));
    c.verdict = std::abs(gap) <= tol ? Verdict::certified : Verdict::violated;
    c.stats["closure_gap"] = gap;
    if (c.verdict == Verdict::violated)
      c.witnesses.push_back({"x0(0) vs birth integral", pb.x0[0], pb.x0[0] - gap});
    report.fold(c);
  }
}

void check_barrier_conditions(const Problem& pb, CertReport& report) {
  const Geometry& geom = pb.geometry;
  const std::size_t n = pb.barriers.size();
  const double x0v = pb.x0.scalar_value();
  const double lo = std::min(-1.0, x0v - 3.0);
  const double hi = std::max(1.0, x0v + 3.0);

  auto state_at = [&](double u) { return GridFunction::constant(geom, u); };
  auto tau_at = [&](std::size_t j, const GridFunction& x) { return pb.barriers[j].tau(x); };

  {
    ConditionCheck c;
    c.name = "barrier-ordering";
    c.verdict = Verdict::certified;
    double worst_first = kInf;
    double worst_gap = kInf;
    for (int k = 0; k <= 400; ++k) {
      const double u = lo + (hi - lo) * k / 400.0;
      const GridFunction x = state_at(u);
      double prev = tau_at(0, x);
      worst_first = std::min(worst_first, prev);
      if (prev <= 1e-12 && c.witnesses.size() < 8) {
        c.verdict = Verdict::violated;
        c.witnesses.push_back({"u = " + fmt(u) + ": tau1 <= 0", prev, 0.0});
      }
      for (std::size_t j = 1; j < n; ++j) {
        const double next = tau_at(j, x);
        worst_gap = std::min(worst_gap, next - prev);
        if (next <= prev + 1e-12 && c.witnesses.size() < 8) {
          c.verdict = Verdict::violated;
          c.witnesses.push_back({"u = " + fmt(u) + ": tau" + std::to_string(j + 1) +
                                     " <= tau" + std::to_string(j),
                                 prev, next});
        }
        prev = next;
      }
    }
    c.stats["min_tau1"] = worst_first;
    if (n > 1) c.stats["min_spacing"] = worst_gap;
    report.fold(c);
  }

  {
    ConditionCheck c;
    c.name = "barrier-reset";
    c.verdict = Verdict::certified;
    for (int k = 0; k <= 400; ++k) {
      const double u = lo + (hi - lo) * k / 400.0;
      const GridFunction x = state_at(u);
      for (std::size_t j = 0; j < n; ++j) {
        const GridFunction jumped = x + pb.barriers[j].impulse(x);
        const double before = tau_at(j, x);
        const double after = tau_at(j, jumped);
        if (after > before + 1e-9 && c.witnesses.size() < 8) {
          c.verdict = Verdict::violated;
          c.witnesses.push_back(
              {"u = " + fmt(u) + ": tau" + std::to_string(j + 1) + " grows across its jump",
               after, before});
        }
        if (j + 1 < n) {
          const double next_after = tau_at(j + 1, jumped);
          if (next_after <= before - 1e-9 && c.witnesses.size() < 8) {
            c.verdict = Verdict::violated;
            c.witnesses.push_back({"u = " + fmt(u) + ": tau" + std::to_string(j + 2) +
                                       " not beyond tau" + std::to_string(j + 1) + " after jump",
                                   next_after, before});
          }
        }
      }
    }
    report.fold(c);
  }

  {
    ConditionCheck c;
    c.name = "barrier-transversality";
    c.verdict = Verdict::certified;
    double worst = -kInf;
    for (int k = 0; k <= 8; ++k) {
      const double u = lo + (hi - lo) * k / 8.0;
      const GridFunction x = state_at(u);
      const GridFunction v = pb.forcing(0.0, x);
      for (std::size_t j = 0; j < n; ++j) {
        const ConstraintFunctional tau_fn = custom_constraint(pb.barriers[j].tau);
        const ADerivativeResult d = a_derivative(pb.op, tau_fn, x, v);
        const double upper = d.value + d.error_bound;
        worst = std::max(worst, upper);
        if (upper >= 1.0 && c.witnesses.size() < 8) {
          c.verdict = Verdict::violated;
          c.witnesses.push_back(
              {"u = " + fmt(u) + ": tau" + std::to_string(j + 1) + " rollout", upper, 1.0});
        }
      }
    }
    c.stats["max_rate"] = worst;
    report.fold(c);
  }
}

void finish_reason(CertReport& report) {
  if (report.verdict == Verdict::certified) return;
  std::string bad;
  for (const auto& c : report.conditions) {
    if (c.verdict == Verdict::certified) continue;
    if (!bad.empty()) bad += ", ";
    bad += c.name;
  }
  report.reason = to_string(report.verdict) + ": " + bad;
}

}  // namespace

CertReport verify_problem_conditions(const Problem& pb) {
  CertReport report;
  switch (pb.scenario.kind) {
    case ProblemKind::plaplace_obstacle:
    case ProblemKind::reaction_diffusion:
      check_obstacle_conditions(pb, report);
      break;
    case ProblemKind::age_structured:
      check_birth_conditions(pb, report);
      check_obstacle_conditions(pb, report);
      break;
    case ProblemKind::impulsive:
      check_barrier_conditions(pb, report);
      break;
    case ProblemKind::custom_linear: {
      ConditionCheck c;
      c.name = "scalar-model";
      c.verdict = Verdict::certified;
      c.note = "no obstacle or barrier hypotheses for the linear model";
      c.stats["coefficient"] = pb.scenario.coefficient;
      report.fold(c);
      break;
    }
  }
  finish_reason(report);
  return report;
}

SampleFamily make_sample_family(const Problem& pb, double delta, int count, std::uint64_t seed) {
  SampleFamily fam;
  if (scalar_kind(pb.scenario.kind)) return fam;
  if (!(delta > 0.0)) throw PreconditionError("make_sample_family: delta must be positive");
  if (count < 1) throw PreconditionError("make_sample_family: count must be positive");

  const Geometry& geom = pb.geometry;
  auto rng = make_rng(seed, std::bit_cast<std::uint64_t>(delta));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto bump = [&](int j) {
    const int profile = j % 3;
    double cx = 0.0, wx = 1.0, cy = 0.0, wy = 1.0;
    if (profile == 2) {
      cx = (0.25 + 0.5 * unit(rng)) * geom.length[0];
      wx = (0.05 + 0.15 * unit(rng)) * geom.length[0];
      if (geom.dim == 2) {
        cy = (0.25 + 0.5 * unit(rng)) * geom.length[1];
        wy = (0.05 + 0.15 * unit(rng)) * geom.length[1];
      }
    }
    std::vector<double> b(static_cast<std::size_t>(geom.total_nodes()), 0.0);
    double peak = 0.0;
    const int nx = geom.nodes[0];
    for (int i = 0; i < geom.total_nodes(); ++i) {
      if (geom.boundary == BoundaryKind::dirichlet_zero && geom.on_boundary(i)) continue;
      const double x = node_x(geom, i);
      const double y = geom.dim == 2 ? geom.coord(1, i / nx) : 0.0;
      double v = 0.0;
      switch (profile) {
        case 0:
          v = 1.0;
          break;
        case 1: {
          const bool in_x = x >= geom.length[0] / 3.0 && x <= 2.0 * geom.length[0] / 3.0;
          const bool in_y =
              geom.dim != 2 || (y >= geom.length[1] / 3.0 && y <= 2.0 * geom.length[1] / 3.0);
          v = in_x && in_y ? 1.0 : 0.0;
          break;
        }
        default: {
          const double dx = (x - cx) / wx;
          v = std::exp(-dx * dx);
          if (geom.dim == 2) {
            const double dy = (y - cy) / wy;
            v *= std::exp(-dy * dy);
          }
          break;
        }
      }
      b[static_cast<std::size_t>(i)] = v;
      peak = std::max(peak, v);
    }
    if (peak > 0.0)
      for (double& v : b) v /= peak;
    return b;
  };

  auto finish = [&](std::vector<double> v) {
    if (geom.boundary == BoundaryKind::dirichlet_zero) {
      for (int i = 0; i < geom.total_nodes(); ++i)
        if (geom.on_boundary(i)) v[static_cast<std::size_t>(i)] = 0.0;
    } else if (geom.boundary == BoundaryKind::nonlocal_birth) {
      const double w0 = geom.quad_weight(0);
      const double b0 = pb.beta_values[0];
      const double denom = 1.0 - w0 * b0;
      if (!(denom > 1e-12))
        throw PreconditionError("make_sample_family: degenerate birth closure");
      double rest = 0.0;
      for (int i = 1; i < geom.total_nodes(); ++i)
        rest += geom.quad_weight(i) * pb.beta_values[static_cast<std::size_t>(i)] *
                v[static_cast<std::size_t>(i)];
      v[0] = rest / denom;
    }
    return GridFunction(geom, std::move(v));
  };

  if (pb.m) {
    for (int j = 0; j < count; ++j) {
      const std::vector<double> b = bump(j);
      std::vector<double> v(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) v[i] = (*pb.m)[i] - delta * b[i];
      fam.lower.push_back(finish(std::move(v)));
    }
  }
  if (pb.M) {
    for (int j = 0; j < count; ++j) {
      const std::vector<double> b = bump(j);
      std::vector<double> v(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) v[i] = (*pb.M)[i] + delta * b[i];
      fam.upper.push_back(finish(std::move(v)));
    }
  }
  return fam;
}

double empirical_growth_rate(const Problem& pb) {
  if (scalar_kind(pb.scenario.kind)) return 0.0;
  double l = -kInf;
  bool any = false;
  if (pb.m) {
    l = std::max(l, growth_probe(pb, *pb.m, true).l_emp);
    any = true;
  }
  if (pb.M) {
    l = std::max(l, growth_probe(pb, *pb.M, false).l_emp);
    any = true;
  }
  return any ? l : 0.0;
}

OmegaFunction default_omega(const Problem& pb, double l_emp) {
  if (pb.scenario.omega_choice == "zero") return omega_linear(0.0);
  switch (pb.scenario.kind) {
    case ProblemKind::plaplace_obstacle:
      return omega_linear(std::max(0.0, l_emp));
    case ProblemKind::reaction_diffusion:
      return omega_linear(std::max(0.0, l_emp - 2.0 * dirichlet_lambda1(pb.geometry)));
    case ProblemKind::age_structured:
      return omega_linear(std::max(0.0, 0.5 * beta_l2_sq(pb) + l_emp));
    case ProblemKind::impulsive:
    case ProblemKind::custom_linear:
      break;
  }
  return omega_linear(0.0);
}

ConditionCheck as_check(const std::string& name, const CertReport& report) {
  ConditionCheck c;
  c.name = name;
  c.verdict = report.verdict;
  c.witnesses = report.witnesses;
  c.stats = report.stats;
  c.note = report.reason;
  return c;
}

CertReport run_pointwise_checks(const Problem& pb) {
  CertReport report;
  if (scalar_kind(pb.scenario.kind)) {
    ConditionCheck c;
    c.name = "pointwise";
    c.verdict = Verdict::certified;
    c.note = "no obstacle constraints for the scalar kinds";
    report.fold(c);
    return report;
  }

  const Scenario& s = pb.scenario;
  const double l_emp = empirical_growth_rate(pb);
  const OmegaFunction omega = default_omega(pb, l_emp);
  const Forcing& forcing = pb.forcing;
  const StateMap fmap = [&forcing](const GridFunction& u) { return forcing(0.0, u); };

  std::vector<SampleFamily> families;
  for (double delta : s.delta_family) {
    families.push_back(make_sample_family(pb, delta, s.samples_per_delta, s.seed));
    const SampleFamily& fam = families.back();
    if (pb.m) {
      report.fold(as_check(
          "pointwise-lower(delta=" + fmt(delta) + ")",
          check_pointwise_condition(pb.op, fmap, quad_lower_obstacle(*pb.m), omega, fam.lower,
                                    Region::outside_K)));
    }
    if (pb.M) {
      report.fold(as_check(
          "pointwise-upper(delta=" + fmt(delta) + ")",
          check_pointwise_condition(pb.op, fmap, quad_upper_obstacle(*pb.M), omega, fam.upper,
                                    Region::outside_K)));
    }
  }
  report.stats["l_emp"] = l_emp;

  if (s.kind == ProblemKind::reaction_diffusion) {
    const double lam1 = dirichlet_lambda1(pb.geometry);
    const double slope = l_emp - 2.0 * lam1;
    ConditionCheck c;
    c.name = "dissipation-structure";
    c.verdict = Verdict::certified;
    double worst = -kInf;
    auto scan = [&](const ConstraintFunctional& V, const std::vector<GridFunction>& states,
                    double delta, const char* side) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        const GridFunction& u = states[j];
        const double vx = V.eval(u);
        const double lhs = trap_inner(V.grad(u), fmap(u) - pb.op.apply(u));
        const double rhs = slope * vx + 1e-8;
        worst = std::max(worst, lhs - rhs);
        if (lhs > rhs && c.witnesses.size() < 8) {
          c.verdict = Verdict::violated;
          c.witnesses.push_back({std::string(side) + " sample " + std::to_string(j) +
                                     " (delta=" + fmt(delta) + ")",
                                 lhs, rhs});
        }
      }
    };
    if (pb.m) {
      const ConstraintFunctional Vm = quad_lower_obstacle(*pb.m);
      for (std::size_t d = 0; d < families.size(); ++d)
        scan(Vm, families[d].lower, s.delta_family[d], "lower");
    }
    if (pb.M) {
      const ConstraintFunctional VM = quad_upper_obstacle(*pb.M);
      for (std::size_t d = 0; d < families.size(); ++d)
        scan(VM, families[d].upper, s.delta_family[d], "upper");
    }
    c.stats["lambda1"] = lam1;
    c.stats["slope"] = slope;
    c.stats["worst_slack"] = worst;
    report.fold(c);
  }

  finish_reason(report);
  return report;
}

}  // namespace semiflow
