#include "semiflow/omega.hpp"

#include <cmath>

#include "semiflow/errors.hpp"

namespace semiflow {
namespace {

void validate_samples(const std::function<double(double)>& fn) {
  if (!fn) throw PreconditionError("omega: missing function");
  if (std::abs(fn(0.0)) > 1e-12) throw PreconditionError("omega: requires omega(0) = 0");
  for (double t = 1e-6; t <= 1.0; t *= 10.0) {
    if (fn(t) < -1e-12) throw PreconditionError("omega: must be nonnegative");
  }
}

}  // namespace

OmegaFunction omega_linear(double C) {
  if (C < 0.0) throw PreconditionError("omega_linear: slope must be nonnegative");
  return OmegaFunction{OmegaForm::linear, [C](double t) { return C * t; }, true};
}

OmegaFunction omega_power(double c, double exponent) {
  if (c < 0.0) throw PreconditionError("omega_power: scale must be nonnegative");
  if (exponent < 1.0) throw PreconditionError("omega_power: exponent must be >= 1");
  return OmegaFunction{OmegaForm::power,
                       [c, exponent](double t) { return c * std::pow(t, exponent); }, true};
}

OmegaFunction omega_xlog() {
  return OmegaFunction{OmegaForm::xlog, [](double t) { return t * std::log1p(t); }, true};
}

OmegaFunction omega_custom(std::function<double(double)> fn, bool monotone) {
  validate_samples(fn);
  return OmegaFunction{OmegaForm::custom, std::move(fn), monotone};
}

}  // namespace semiflow
