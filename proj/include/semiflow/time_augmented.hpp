#pragma once

#include <cmath>

#include "semiflow/resolvent_oracle.hpp"

namespace semiflow {

// State of the clock-extended system: the flow t' = 0, x' + Ax = 0. The
// product resolvent fixes the clock and delegates, and is nonexpansive in
// |t| + ||x|| whenever the inner resolvent is.
struct TimeState {
  double clock = 0.0;
  GridFunction state;

  double norm() const { return std::abs(clock) + state.norm(); }
};

inline TimeState time_augmented_resolve(const ResolventOracle& inner, double lambda,
                                        const TimeState& z) {
  return TimeState{z.clock, inner.resolve(lambda, z.state)};
}

}  // namespace semiflow
