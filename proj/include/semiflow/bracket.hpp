#pragma once

#include "semiflow/grid_function.hpp"

namespace semiflow {

enum class BracketSide { plus, minus };

// One-sided norm bracket [x, y]_side: the right (plus) or left (minus)
// derivative of h -> ||x + h y|| at h = 0.
//
// Discrete l2: <x, y> / ||x|| for x != 0, else +-||y||.
// Discrete sup: extremum of sign(x_i) y_i over indices attaining ||x||_inf
// (plus takes the max, minus the min); ties within 1e-12 of the max count
// as attaining.
double bracket(const GridFunction& x, const GridFunction& y, BracketSide side);

}  // namespace semiflow
