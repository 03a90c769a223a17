#pragma once

#include <utility>
#include <vector>

#include "semiflow/trajectory.hpp"

namespace semiflow {

// Worst violation, over time pairs s <= t, of the two-trajectory dissipativity
// estimate
//   e^{-t a} ||u1(t)-u2(t)||  <=  e^{-s a} ||u1(s)-u2(s)||
//                                 + int_s^t e^{-z a} ||w1(z)-w2(z)|| dz
// with the time integral evaluated by trapezoid on the shared grid. A result
// <= 0 (up to quadrature error) means the estimate holds on every pair; both
// trajectories must share times and geometry.
double benilan_residual(const Trajectory& u1, const Trajectory& u2, double alpha);

// Worst violation, over graph pairs (y, v) and time pairs s <= t, of the
// integral-solution inequality
//   e^{-t a} ||u(t)-y||  <=  e^{-s a} ||u(s)-y||
//                            + int_s^t e^{-z a} [u(z)-y, w(z)-v]_+ dz.
double integral_inequality_residual(const Trajectory& u,
                                    const std::vector<std::pair<GridFunction, GridFunction>>& graph,
                                    double alpha);

}  // namespace semiflow
