#pragma once

#include <functional>

namespace semiflow {

enum class OmegaForm { linear, power, xlog, custom };

// Nonnegative comparison function with omega(0) = 0; the right-hand side of
// the scalar domination problem x' = omega(x). Factories validate the sign
// and root conditions on a sample grid.
struct OmegaFunction {
  OmegaForm form = OmegaForm::custom;
  std::function<double(double)> fn;
  bool monotone = false;

  double operator()(double t) const { return fn(t); }
};

OmegaFunction omega_linear(double C);
OmegaFunction omega_power(double c, double exponent);
OmegaFunction omega_xlog();
OmegaFunction omega_custom(std::function<double(double)> fn, bool monotone = false);

}  // namespace semiflow
