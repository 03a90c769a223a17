#pragma once

#include <functional>
#include <limits>

#include "semiflow/grid_function.hpp"

namespace semiflow {

// An operator A presented through its resolvent (I + lambda A)^{-1}. `alpha`
// is the quasi-accretivity constant: A + alpha I is accretive, so the
// resolvent is Lipschitz with constant 1/(1 - lambda*alpha) while
// lambda*alpha < 1. `apply` (direct evaluation of A) and `in_domain` are
// optional; consumers that need them report inconclusive when absent.
struct ResolventOracle {
  std::function<GridFunction(double, const GridFunction&)> resolve;
  double alpha = 0.0;
  double lambda_max = std::numeric_limits<double>::infinity();
  std::function<bool(const GridFunction&)> in_domain;
  std::function<GridFunction(const GridFunction&)> apply;
};

// A_lambda x = (x - J_lambda x) / lambda, an everywhere-defined approximation
// of A that selects values of A on resolvent images.
GridFunction yosida(const ResolventOracle& op, double lambda, const GridFunction& x);

void require_lambda(const ResolventOracle& op, double lambda, const char* where);

}  // namespace semiflow
