#pragma once

#include <vector>

#include "semiflow/grid_function.hpp"

namespace semiflow {

// Per-step diagnostics from the marching schemes.
struct StepMeta {
  int inner_iterations = 0;
  bool picard_converged = true;
  double increment_norm = 0.0;
};

// A sampled evolution path: states u(t_k) and the forcing values w(t_k)
// recorded along it. times starts at 0 and is strictly increasing;
// states and forcings have one entry per time, step_meta one per step.
struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> states;
  std::vector<GridFunction> forcings;
  std::vector<StepMeta> step_meta;

  std::size_t size() const { return times.size(); }
};

}  // namespace semiflow
