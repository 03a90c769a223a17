#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semiflow/cert_report.hpp"
#include "semiflow/scenario.hpp"

namespace semiflow {

struct RunOptions {
  std::string out_dir;  // empty: write no files
  bool svg = false;
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  std::optional<int> steps;           // overrides the scenario step count
};

struct RunReport {
  std::string name;
  CertReport conditions;  // data-side hypotheses
  CertReport pointwise;   // sampled pointwise certification

  // Trajectory summaries; obstacle entries are NaN when the scenario has no
  // corresponding obstacle.
  double min_u_minus_m = 0.0;
  double max_u_minus_M = 0.0;
  double v_lower_max = 0.0;
  double v_lower_final = 0.0;
  double v_upper_max = 0.0;
  double v_upper_final = 0.0;
  std::optional<double> first_exit;

  std::vector<int> hit_counts;
  std::vector<double> event_times;
  std::vector<std::string> violations;
  bool blew_up = false;
  double blowup_time = 0.0;

  std::vector<std::string> files;

  // Everything certified and the trajectory never left the constraint set.
  bool ok() const;
};

RunReport run_scenario(const Scenario& scenario, const RunOptions& opts = {});

}  // namespace semiflow
