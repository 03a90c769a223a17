#pragma once

#include <vector>

#include "semiflow/resolvent_oracle.hpp"

namespace semiflow {

struct NewtonOptions {
  int max_iter = 50;
  double abs_tol = 1e-11;
  bool damping = true;
};

// A u = -(|u'|^{p-2} u')' on (0, length) with zero Dirichlet data, p >= 2,
// discretized in flux form on a uniform grid of `nodes` points (boundary
// included). The resolvent solves the nonlinear tridiagonal system
//   u_i - (lambda/h) [phi((u_{i+1}-u_i)/h) - phi((u_i-u_{i-1})/h)] = g_i
// with phi(s) = |s|^{p-2} s by damped Newton (initial guess g, step halving
// until the sup residual decreases).
struct PLaplaceSpec {
  double p = 3.0;
  double length = 1.0;
  int interior_nodes = 101;  // grid carries interior_nodes + 2 points
  NewtonOptions newton;
  NormTag tag = NormTag::sup;
};
ResolventOracle make_plaplace(const PLaplaceSpec& spec);
Geometry geometry_of(const PLaplaceSpec& spec);

// Direct flux-form application of the operator above; exposed for oracles
// and explicit schemes.
GridFunction plaplace_apply(double p, const GridFunction& u);

// A u = -Laplace(u) with zero Dirichlet data, centered differences.
// 1D resolvents are Thomas solves; 2D uses conjugate gradients on the
// five-point stencil (the shifted matrix I + lambda A_h is symmetric
// positive definite).
struct LaplaceSpec {
  int dim = 1;
  std::array<double, 2> length{1.0, 1.0};
  std::array<int, 2> nodes{101, 101};
  double cg_tol = 1e-12;
  int cg_max_iter = 0;  // 0: 10x unknown count
  NormTag tag = NormTag::sup;
};
ResolventOracle make_laplace(const LaplaceSpec& spec);
Geometry geometry_of(const LaplaceSpec& spec);

// Smallest eigenvalue of the discrete Dirichlet Laplacian of `spec`,
// 2/h^2 (1 - cos(pi h / l)) summed over axes.
double laplace_lambda1(const LaplaceSpec& spec);

// A u = u' on (0, age_horizon) with the nonlocal birth condition
// u(0) = int beta u dx (trapezoid). Requires beta >= 0 with int beta < 1;
// the resolvent sweeps the implicit upwind recursion
//   u_i (1 + lambda/h) = g_i + (lambda/h) u_{i-1}
// written as u = u(0) e + G, then closes u(0) (1 - <beta, e>) = <beta, G>.
// The closure denominator stays >= 1 - int beta > 0 because 0 < e <= 1.
struct TransportBirthSpec {
  double age_horizon = 2.0;
  int nodes = 201;
  std::vector<double> beta;  // sampled on the grid, size == nodes
  NormTag tag = NormTag::sup;
};
ResolventOracle make_transport_birth(const TransportBirthSpec& spec);
Geometry geometry_of(const TransportBirthSpec& spec);

// A u = coefficient * u, componentwise on any geometry. Scalar model problems
// use this on the three-node scalar embedding. For coefficient < 0 the
// operator is quasi-accretive with alpha = -coefficient.
struct DiagonalSpec {
  double coefficient = 1.0;
  Geometry geometry = scalar_geometry();
};
ResolventOracle make_diagonal(const DiagonalSpec& spec);

// A = 0; the resolvent is the identity.
ResolventOracle make_zero_operator(const Geometry& geometry);

}  // namespace semiflow
