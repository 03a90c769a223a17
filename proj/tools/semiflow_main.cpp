#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "semiflow/bracket.hpp"
#include "semiflow/conditions.hpp"
#include "semiflow/errors.hpp"
#include "semiflow/invariance.hpp"
#include "semiflow/oracles.hpp"
#include "semiflow/run.hpp"

namespace {

using namespace semiflow;

std::string shortg(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  (void)ec;
  return std::string(buf, p);
}

struct Outcome {
  int code = 0;
  std::string text;
};

void print_cert(std::ostream& os, const char* title, const CertReport& report, bool quiet) {
  os << title << ": " << to_string(report.verdict);
  if (!report.reason.empty()) os << " (" << report.reason << ")";
  os << "\n";
  if (quiet) return;
  for (const ConditionCheck& c : report.conditions) {
    os << "  [" << to_string(c.verdict) << "] " << c.name;
    for (const auto& [k, v] : c.stats) os << " " << k << "=" << shortg(v);
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
    std::size_t shown = 0;
    for (const Witness& w : c.witnesses) {
      if (++shown > 3) {
        os << "    ... " << c.witnesses.size() - 3 << " more witnesses\n";
        break;
      }
      os << "    witness: " << w.where << " (lhs=" << shortg(w.lhs) << ", rhs=" << shortg(w.rhs)
         << ")\n";
    }
  }
}

void print_run(std::ostream& os, const RunReport& rep, bool quiet) {
  if (quiet) {
    os << rep.name << ": " << (rep.ok() ? "ok" : "FAIL") << "\n";
    return;
  }
  os << "== " << rep.name << " ==\n";
  print_cert(os, "conditions", rep.conditions, false);
  print_cert(os, "pointwise", rep.pointwise, false);
  if (!std::isnan(rep.v_lower_max))
    os << "V_m: max=" << shortg(rep.v_lower_max) << " final=" << shortg(rep.v_lower_final)
       << "  min(u-m)=" << shortg(rep.min_u_minus_m) << "\n";
  if (!std::isnan(rep.v_upper_max))
    os << "V_M: max=" << shortg(rep.v_upper_max) << " final=" << shortg(rep.v_upper_final)
       << "  max(u-M)=" << shortg(rep.max_u_minus_M) << "\n";
  if (rep.first_exit)
    os << "first exit: t=" << shortg(*rep.first_exit) << "\n";
  else if (!std::isnan(rep.v_lower_max) || !std::isnan(rep.v_upper_max))
    os << "first exit: none\n";
  if (!rep.hit_counts.empty()) {
    os << "hits:";
    for (int h : rep.hit_counts) os << " " << h;
    if (!rep.event_times.empty()) {
      os << "  at t =";
      for (double t : rep.event_times) os << " " << shortg(t);
    }
    os << "\n";
  }
  for (const std::string& v : rep.violations) os << "violation: " << v << "\n";
  if (rep.blew_up) os << "blow-up at t=" << shortg(rep.blowup_time) << "\n";
  for (const std::string& f : rep.files) os << "wrote " << f << "\n";
  os << "status: " << (rep.ok() ? "ok" : "FAIL") << "\n";
}

int classify(const std::exception& e) {
  if (dynamic_cast<const SolverError*>(&e)) return 3;
  if (dynamic_cast<const NonFiniteError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const EvalError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const GeometryError*>(&e))
    return 2;
  return 3;
}

Outcome run_one(const std::string& path, const RunOptions& opts, bool quiet) {
  std::ostringstream os;
  Outcome out;
  try {
    const Scenario s = parse_scenario_file(path);
    const RunReport rep = run_scenario(s, opts);
    print_run(os, rep, quiet);
    out.code = rep.ok() ? 0 : 1;
  } catch (const std::exception& e) {
    os << path << ": error: " << e.what() << "\n";
    out.code = classify(e);
  }
  out.text = os.str();
  return out;
}

Outcome check_one(const std::string& path, std::optional<std::uint64_t> seed, bool quiet) {
  std::ostringstream os;
  Outcome out;
  try {
    Scenario s = parse_scenario_file(path);
    if (seed) s.seed = *seed;
    const Problem pb = build_problem(s);
    const CertReport conditions = verify_problem_conditions(pb);
    const CertReport pointwise = run_pointwise_checks(pb);
    if (quiet) {
      const bool ok = conditions.verdict == Verdict::certified &&
                      pointwise.verdict == Verdict::certified;
      os << s.name << ": " << (ok ? "certified" : "NOT certified") << "\n";
      out.code = ok ? 0 : 1;
    } else {
      os << "== " << s.name << " ==\n";
      print_cert(os, "conditions", conditions, false);
      print_cert(os, "pointwise", pointwise, false);
      out.code = conditions.verdict == Verdict::certified &&
                         pointwise.verdict == Verdict::certified
                     ? 0
                     : 1;
    }
  } catch (const std::exception& e) {
    os << path << ": error: " << e.what() << "\n";
    out.code = classify(e);
  }
  out.text = os.str();
  return out;
}

// Small independent cross-checks of the reference machinery itself.
int run_validate(bool quiet) {
  struct Check {
    std::string name;
    bool ok;
    std::string detail;
  };
  std::vector<Check> checks;

  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({name, ok, detail});
  };

  try {
    {
      LaplaceSpec spec;
      spec.nodes = {101, 0};
      const ResolventOracle op = make_laplace(spec);
      const Geometry grid = geometry_of(spec);
      const double pi = std::acos(-1.0);
      const GridFunction x0 =
          GridFunction::sample(grid, [&](double x, double) { return std::sin(pi * x); });
      const GridFunction u = crandall_liggett(op, x0, 0.1, 512);
      const GridFunction ref = heat_spectral({{1, 1.0}}, 1.0, 0.1, grid);
      const double err = (u - ref).sup_norm();
      add("exponential formula vs spectral heat solution", err < 5e-3,
          "sup error " + shortg(err));
    }
    {
      const auto rhs = [](double, double x) { return x; };
      const double e1 = std::abs(rk4_scalar(rhs, 1.0, 1.0, 100).values.back() - std::exp(1.0));
      const double e2 = std::abs(rk4_scalar(rhs, 1.0, 1.0, 200).values.back() - std::exp(1.0));
      add("rk4 fourth-order convergence", e2 > 0.0 && e1 / e2 >= 14.0,
          "error ratio " + shortg(e1 / e2));
    }
    {
      const PerronResult res = perron_max_solution(omega_linear(1.0), 1.0, 1.0);
      const double err = std::abs(res.estimate.values.back() - std::exp(1.0));
      add("maximal solution of x' = x", err < 1e-6, "error at T " + shortg(err));
    }
    {
      const Geometry g = scalar_geometry(NormTag::l2);
      const GridFunction x = GridFunction::constant(g, 2.0);
      const GridFunction y = GridFunction::constant(g, -3.0);
      const double plus = bracket(x, y, BracketSide::plus);
      const double expected = dot(x, y) / x.norm();
      add("norm bracket closed form", std::abs(plus - expected) < 1e-12,
          "gap " + shortg(std::abs(plus - expected)));
    }
    {
      const ScalarTrajectory zero{{0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}};
      const ScalarTrajectory hump{{0.0, 0.5, 1.0}, {0.0, 0.25, 1.0}};
      const bool below = static_cast<bool>(comparison_check(zero, omega_linear(0.0), hump));
      const bool above = static_cast<bool>(comparison_check(hump, omega_linear(0.0), zero));
      add("trajectory domination verdicts", below && !above, "");
    }
  } catch (const std::exception& e) {
    add("validation battery", false, e.what());
  }

  int failures = 0;
  for (const Check& c : checks) {
    if (!c.ok) ++failures;
    if (!quiet || !c.ok) {
      std::cout << (c.ok ? "[ok]   " : "[FAIL] ") << c.name;
      if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
      std::cout << "\n";
    }
  }
  std::cout << (failures == 0 ? "validate: all checks passed" : "validate: FAILURES") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant-set certification and simulation for nonlinear semigroup flows"};
  app.require_subcommand(1);

  const char* env_dir = std::getenv("SEMIFLOW_OUT_DIR");
  std::string out_dir = env_dir ? env_dir : "out";
  bool svg = false;
  bool quiet = false;
  int parallel = 1;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::vector<std::string> files;

  CLI::App* cmd_run = app.add_subcommand("run", "simulate scenarios and certify their hypotheses");
  cmd_run->add_option("files", files, "scenario files")->required()->expected(-1);
  cmd_run->add_option("--out-dir", out_dir, "directory for CSV/SVG output");
  cmd_run->add_flag("--svg", svg, "also write SVG plots");
  cmd_run->add_option("--seed", seed, "override the sampling seed");
  cmd_run->add_option("--steps", steps, "override the scenario step count");
  cmd_run->add_flag("--quiet", quiet, "one status line per scenario");
  cmd_run->add_option("--parallel", parallel, "run scenarios on N threads")
      ->check(CLI::PositiveNumber);

  CLI::App* cmd_check =
      app.add_subcommand("check", "verify scenario hypotheses without simulating");
  cmd_check->add_option("files", files, "scenario files")->required()->expected(-1);
  cmd_check->add_option("--seed", seed, "override the sampling seed");
  cmd_check->add_flag("--quiet", quiet, "one status line per scenario");

  std::string beta_text;
  double gamma = 0.0;
  CLI::App* cmd_slow =
      app.add_subcommand("certify-slow", "certify a slow function beta(x) near zero");
  cmd_slow->add_option("--beta", beta_text, "expression in x")->required();
  cmd_slow->add_option("--gamma", gamma, "lower bound for x / beta(x)")->required();
  cmd_slow->add_flag("--quiet", quiet, "suppress witness lines");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "cross-check the reference oracles against closed forms");
  cmd_validate->add_flag("--quiet", quiet, "print failures only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*cmd_validate) return run_validate(quiet);

  if (*cmd_slow) {
    try {
      const Expression beta = parse_expression(beta_text);
      VarSet allowed;
      allowed.x = true;
      if (!beta.references().subset_of(allowed))
        throw ConfigError("beta may only reference x, got {" + beta.references().names() + "}");
      if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
      const auto fn = [&beta](double x) {
        EvalEnv env;
        env.x = x;
        return beta.eval(env);
      };
      const CertReport rep = certify_slow(fn, gamma);
      std::ostringstream os;
      os << "certify-slow(" << beta.print() << ", gamma=" << shortg(gamma)
         << "): " << to_string(rep.verdict);
      for (const auto& [k, v] : rep.stats) os << " " << k << "=" << shortg(v);
      os << "\n";
      if (!quiet) {
        for (const Witness& w : rep.witnesses)
          os << "  witness: " << w.where << " (quotient=" << shortg(w.lhs) << ")\n";
      }
      std::cout << os.str();
      return rep.verdict == Verdict::certified ? 0 : 1;
    } catch (const std::exception& e) {
      std::cout << "certify-slow: error: " << e.what() << "\n";
      return classify(e);
    }
  }

  const bool is_run = static_cast<bool>(*cmd_run);
  RunOptions opts;
  opts.out_dir = out_dir;
  opts.svg = svg;
  opts.seed = seed;
  opts.steps = steps;

  std::vector<Outcome> outcomes(files.size());
  const int workers = std::min<int>(parallel, static_cast<int>(files.size()));
  if (is_run && workers > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= files.size()) return;
          outcomes[i] = run_one(files[i], opts, quiet);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  } else {
    for (std::size_t i = 0; i < files.size(); ++i)
      outcomes[i] = is_run ? run_one(files[i], opts, quiet) : check_one(files[i], seed, quiet);
  }

  int code = 0;
  for (const Outcome& o : outcomes) {
    std::cout << o.text;
    code = std::max(code, o.code);
  }
  return code;
}
