#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semiflow/cert_report.hpp"
#include "semiflow/omega.hpp"
#include "semiflow/scenario.hpp"

namespace semiflow {

// Finite-difference probe in s around an obstacle: quotients
// q(s) = max over nodes of [-(A b)(x) + f(x, b(x)+s)] / s on a decade
// schedule of scales. A bounded family certifies the one-sided growth
// hypothesis; quotients that keep growing a decade per decade expose a
// violated margin at s = 0.
struct ProbeResult {
  std::vector<double> scales;
  std::vector<double> quotients;
  double l_emp = 0.0;  // max quotient over the schedule
  bool violated = false;
  int worst_node = -1;
};

ProbeResult growth_probe(const Problem& pb, const GridFunction& obstacle, bool lower);

// Data-side hypothesis checks for the scenario kind: obstacle ordering and
// boundary compatibility, direct sub/supersolution margins, growth probes,
// birth-kernel and birth-compatibility conditions, barrier ordering, reset
// and transversality. Pure; runs no time marching.
CertReport verify_problem_conditions(const Problem& pb);

// States straddling the obstacles, admissible for the operator: boundary
// nodes pinned, birth closure enforced on the age grid.
struct SampleFamily {
  std::vector<GridFunction> lower;  // m - delta * bump
  std::vector<GridFunction> upper;  // M + delta * bump
};

SampleFamily make_sample_family(const Problem& pb, double delta, int count, std::uint64_t seed);

// Max probe quotient over both obstacles; the empirical stand-in for the
// one-sided growth rate near the constraint.
double empirical_growth_rate(const Problem& pb);

// Comparison function used by the pointwise certification when the scenario
// says omega = auto; clamped at zero so it stays an admissible right-hand
// side for the scalar domination problem.
OmegaFunction default_omega(const Problem& pb, double l_emp);

// Pointwise certification over the delta family of sampled states, merged
// into one report; reaction-diffusion scenarios additionally get the
// dissipation-structure slack check against (l_emp - 2 lambda1) V.
CertReport run_pointwise_checks(const Problem& pb);

// Wraps a standalone report as a named part of a larger one.
ConditionCheck as_check(const std::string& name, const CertReport& report);

}  // namespace semiflow
