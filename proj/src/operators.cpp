#include "semiflow/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semiflow/errors.hpp"

namespace semiflow {
namespace {

constexpr double kSlopeFloor = 1e-12;

void check_input(const Geometry& geom, const GridFunction& g, const char* where) {
  if (!compatible(geom, g.geometry())) {
    throw GeometryError(std::string(where) + ": input lives on a different grid");
  }
}

// Tridiagonal solve, overwrites d with the solution. a is the subdiagonal
// (a[0] unused), c the superdiagonal (c[m-1] unused).
void thomas_solve(std::vector<double>& a, std::vector<double>& b,
                  std::vector<double>& c, std::vector<double>& d) {
  const std::size_t m = d.size();
  for (std::size_t i = 1; i < m; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[m - 1] /= b[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
  }
}

double phi_flux(double p, double s) {
  if (p == 2.0) return s;
  if (s == 0.0) return 0.0;
  return std::pow(std::abs(s), p - 2.0) * s;
}

double phi_slope(double p, double s) {
  if (p == 2.0) return 1.0;
  return std::max((p - 1.0) * std::pow(std::abs(s), p - 2.0), kSlopeFloor);
}

// Sup norm of the p-Laplace resolvent residual
//   F_i = u_i - (lambda/h) [phi(D_{i+1}) - phi(D_i)] - g_i
// over interior nodes; F is resized and filled.
double plaplace_residual(double p, double lambda, double h,
                         const std::vector<double>& u,
                         const std::vector<double>& g,
                         std::vector<double>& F) {
  const std::size_t n = u.size();
  F.assign(n - 2, 0.0);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dl = (u[i] - u[i - 1]) / h;
    const double dr = (u[i + 1] - u[i]) / h;
    const double val = u[i] - (lambda / h) * (phi_flux(p, dr) - phi_flux(p, dl)) - g[i];
    F[i - 1] = val;
    worst = std::max(worst, std::abs(val));
  }
  return worst;
}

}  // namespace

GridFunction plaplace_apply(double p, const GridFunction& u) {
  const Geometry& geom = u.geometry();
  if (geom.dim != 1) throw GeometryError("plaplace_apply: 1D grids only");
  const int n = geom.nodes[0];
  const double h = geom.spacing(0);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    const double dl = (u[i] - u[i - 1]) / h;
    const double dr = (u[i + 1] - u[i]) / h;
    out[static_cast<std::size_t>(i)] = -(phi_flux(p, dr) - phi_flux(p, dl)) / h;
  }
  return u.with_values(std::move(out));
}

Geometry geometry_of(const PLaplaceSpec& spec) {
  if (spec.p < 2.0) throw PreconditionError("make_plaplace: requires p >= 2");
  if (spec.interior_nodes < 3) throw PreconditionError("make_plaplace: needs >= 3 interior nodes");
  Geometry geom;
  geom.dim = 1;
  geom.length = {spec.length, 0.0};
  geom.nodes = {spec.interior_nodes + 2, 0};
  geom.boundary = BoundaryKind::dirichlet_zero;
  geom.norm_tag = spec.tag;
  geom.validate();
  return geom;
}

ResolventOracle make_plaplace(const PLaplaceSpec& spec) {
  const Geometry geom = geometry_of(spec);

  const double p = spec.p;
  const NewtonOptions newton = spec.newton;

  ResolventOracle op;
  op.alpha = 0.0;
  op.resolve = [geom, p, newton](double lambda, const GridFunction& g) {
    check_input(geom, g, "plaplace resolve");
    if (!(lambda > 0.0)) throw PreconditionError("plaplace resolve: lambda must be positive");
    const int n = geom.nodes[0];
    const double h = geom.spacing(0);

    std::vector<double> u = g.values();
    u.front() = 0.0;
    u.back() = 0.0;

    std::vector<double> F, Ftrial;
    std::vector<double> sub, diag, sup, rhs;
    double res = plaplace_residual(p, lambda, h, u, g.values(), F);
    for (int iter = 0; iter < newton.max_iter; ++iter) {
      if (res <= newton.abs_tol) return GridFunction(geom, std::move(u));

      const std::size_t m = static_cast<std::size_t>(n) - 2;
      sub.assign(m, 0.0);
      diag.assign(m, 0.0);
      sup.assign(m, 0.0);
      rhs.assign(m, 0.0);
      const double scale = lambda / (h * h);
      for (std::size_t i = 1; i + 1 < static_cast<std::size_t>(n); ++i) {
        const double sl = phi_slope(p, (u[i] - u[i - 1]) / h);
        const double sr = phi_slope(p, (u[i + 1] - u[i]) / h);
        const std::size_t k = i - 1;
        diag[k] = 1.0 + scale * (sl + sr);
        if (k > 0) sub[k] = -scale * sl;
        if (k + 1 < m) sup[k] = -scale * sr;
        rhs[k] = -F[k];
      }
      thomas_solve(sub, diag, sup, rhs);

      double step = 1.0;
      bool accepted = false;
      std::vector<double> trial(u.size());
      while (step > 1e-9) {
        trial = u;
        for (std::size_t k = 0; k < m; ++k) trial[k + 1] += step * rhs[k];
        const double res_trial = plaplace_residual(p, lambda, h, trial, g.values(), Ftrial);
        if (res_trial < res || !newton.damping) {
          u.swap(trial);
          F.swap(Ftrial);
          res = res_trial;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) throw SolverError("plaplace resolve: line search stalled", res, iter);
    }
    if (res <= newton.abs_tol) return GridFunction(geom, std::move(u));
    throw SolverError("plaplace resolve: Newton did not converge", res, newton.max_iter);
  };
  op.apply = [geom, p](const GridFunction& u) {
    check_input(geom, u, "plaplace apply");
    // Keeps the input's boundary kind: obstacles carry nonzero end values.
    return GridFunction(geom, plaplace_apply(p, u).values());
  };
  op.in_domain = [geom](const GridFunction& u) {
    return compatible(geom, u.geometry());
  };
  return op;
}

double laplace_lambda1(const LaplaceSpec& spec) {
  constexpr double kPi = 3.14159265358979323846;
  double total = 0.0;
  for (int axis = 0; axis < spec.dim; ++axis) {
    const double h = spec.length[axis] / (spec.nodes[axis] - 1);
    total += 2.0 / (h * h) * (1.0 - std::cos(kPi * h / spec.length[axis]));
  }
  return total;
}

namespace {

// -Laplace_h with zero Dirichlet data; boundary entries of the output are 0.
std::vector<double> laplace_apply_values(const Geometry& geom, const std::vector<double>& u) {
  std::vector<double> out(u.size(), 0.0);
  if (geom.dim == 1) {
    const int n = geom.nodes[0];
    const double h2 = geom.spacing(0) * geom.spacing(0);
    for (int i = 1; i + 1 < n; ++i) {
      out[static_cast<std::size_t>(i)] = (2.0 * u[i] - u[i - 1] - u[i + 1]) / h2;
    }
    return out;
  }
  const int nx = geom.nodes[0];
  const int ny = geom.nodes[1];
  const double hx2 = geom.spacing(0) * geom.spacing(0);
  const double hy2 = geom.spacing(1) * geom.spacing(1);
  for (int j = 1; j + 1 < ny; ++j) {
    for (int i = 1; i + 1 < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      out[k] = (2.0 * u[k] - u[k - 1] - u[k + 1]) / hx2 +
               (2.0 * u[k] - u[k - nx] - u[k + nx]) / hy2;
    }
  }
  return out;
}

GridFunction laplace_resolve_1d(const Geometry& geom, double lambda, const GridFunction& g) {
  const int n = geom.nodes[0];
  const double r = lambda / (geom.spacing(0) * geom.spacing(0));
  const std::size_t m = static_cast<std::size_t>(n) - 2;
  std::vector<double> sub(m, -r), diag(m, 1.0 + 2.0 * r), sup(m, -r), rhs(m);
  for (std::size_t k = 0; k < m; ++k) rhs[k] = g[k + 1];
  thomas_solve(sub, diag, sup, rhs);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (std::size_t k = 0; k < m; ++k) out[k + 1] = rhs[k];
  return GridFunction(geom, std::move(out));
}

GridFunction laplace_resolve_2d(const Geometry& geom, double lambda, const GridFunction& g,
                                double tol, int max_iter) {
  const int nx = geom.nodes[0];
  const int ny = geom.nodes[1];
  const double rx = lambda / (geom.spacing(0) * geom.spacing(0));
  const double ry = lambda / (geom.spacing(1) * geom.spacing(1));
  const int mx = nx - 2, my = ny - 2;
  const std::size_t m = static_cast<std::size_t>(mx) * my;
  if (max_iter <= 0) max_iter = 10 * static_cast<int>(m) + 100;

  const auto idx = [mx](int i, int j) { return static_cast<std::size_t>(j) * mx + i; };
  // v -> (I + lambda A_h) v on the interior block.
  const auto shifted = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (int j = 0; j < my; ++j) {
      for (int i = 0; i < mx; ++i) {
        double acc = (1.0 + 2.0 * rx + 2.0 * ry) * v[idx(i, j)];
        acc -= rx * (i > 0 ? v[idx(i - 1, j)] : 0.0);
        acc -= rx * (i + 1 < mx ? v[idx(i + 1, j)] : 0.0);
        acc -= ry * (j > 0 ? v[idx(i, j - 1)] : 0.0);
        acc -= ry * (j + 1 < my ? v[idx(i, j + 1)] : 0.0);
        out[idx(i, j)] = acc;
      }
    }
  };

  std::vector<double> b(m);
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      b[idx(i, j)] = g[static_cast<std::size_t>(j + 1) * nx + (i + 1)];
    }
  }
  const auto nrm2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  const double bnorm = nrm2(b);
  std::vector<double> x(m, 0.0);
  std::vector<double> out_full(static_cast<std::size_t>(nx) * ny, 0.0);
  if (bnorm == 0.0) return GridFunction(geom, std::move(out_full));

  std::vector<double> r = b, pdir = b, Ap(m);
  double rr = 0.0;
  for (double v : r) rr += v * v;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (std::sqrt(rr) <= tol * bnorm) break;
    shifted(pdir, Ap);
    double pAp = 0.0;
    for (std::size_t k = 0; k < m; ++k) pAp += pdir[k] * Ap[k];
    const double a = rr / pAp;
    for (std::size_t k = 0; k < m; ++k) {
      x[k] += a * pdir[k];
      r[k] -= a * Ap[k];
    }
    double rr_next = 0.0;
    for (double v : r) rr_next += v * v;
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t k = 0; k < m; ++k) pdir[k] = r[k] + beta * pdir[k];
  }
  if (std::sqrt(rr) > tol * bnorm) {
    throw SolverError("laplace resolve: conjugate gradients did not converge",
                      std::sqrt(rr) / bnorm, iter);
  }
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      out_full[static_cast<std::size_t>(j + 1) * nx + (i + 1)] = x[idx(i, j)];
    }
  }
  return GridFunction(geom, std::move(out_full));
}

}  // namespace

Geometry geometry_of(const LaplaceSpec& spec) {
  Geometry geom;
  geom.dim = spec.dim;
  geom.length = spec.length;
  geom.nodes = spec.nodes;
  geom.boundary = BoundaryKind::dirichlet_zero;
  geom.norm_tag = spec.tag;
  geom.validate();
  return geom;
}

ResolventOracle make_laplace(const LaplaceSpec& spec) {
  const Geometry geom = geometry_of(spec);

  const double tol = spec.cg_tol;
  const int max_iter = spec.cg_max_iter;

  ResolventOracle op;
  op.alpha = 0.0;
  op.resolve = [geom, tol, max_iter](double lambda, const GridFunction& g) {
    check_input(geom, g, "laplace resolve");
    if (!(lambda > 0.0)) throw PreconditionError("laplace resolve: lambda must be positive");
    if (geom.dim == 1) return laplace_resolve_1d(geom, lambda, g);
    return laplace_resolve_2d(geom, lambda, g, tol, max_iter);
  };
  op.apply = [geom](const GridFunction& u) {
    check_input(geom, u, "laplace apply");
    return GridFunction(geom, laplace_apply_values(geom, u.values()));
  };
  op.in_domain = [geom](const GridFunction& u) {
    return compatible(geom, u.geometry());
  };
  return op;
}

Geometry geometry_of(const TransportBirthSpec& spec) {
  Geometry geom;
  geom.dim = 1;
  geom.length = {spec.age_horizon, 0.0};
  geom.nodes = {spec.nodes, 0};
  geom.boundary = BoundaryKind::nonlocal_birth;
  geom.norm_tag = spec.tag;
  geom.validate();
  return geom;
}

ResolventOracle make_transport_birth(const TransportBirthSpec& spec) {
  const Geometry geom = geometry_of(spec);

  if (static_cast<int>(spec.beta.size()) != spec.nodes) {
    throw PreconditionError("make_transport_birth: beta must be sampled on the grid");
  }
  for (double b : spec.beta) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw PreconditionError("make_transport_birth: beta must be finite and nonnegative");
    }
  }
  const GridFunction beta(Geometry{geom.dim, geom.length, geom.nodes,
                                   BoundaryKind::none, geom.norm_tag},
                          spec.beta);
  const double beta_mass = trap_integral(beta);
  if (!(beta_mass < 1.0)) {
    throw PreconditionError("make_transport_birth: birth kernel mass must be below 1, got " +
                            std::to_string(beta_mass));
  }

  ResolventOracle op;
  op.alpha = 0.0;
  op.resolve = [geom, beta](double lambda, const GridFunction& g) {
    check_input(geom, g, "transport resolve");
    if (!(lambda > 0.0)) throw PreconditionError("transport resolve: lambda must be positive");
    const int n = geom.nodes[0];
    const double r = lambda / geom.spacing(0);
    std::vector<double> E(static_cast<std::size_t>(n)), G(static_cast<std::size_t>(n));
    E[0] = 1.0;
    G[0] = 0.0;
    for (int i = 1; i < n; ++i) {
      E[static_cast<std::size_t>(i)] = E[static_cast<std::size_t>(i) - 1] * r / (1.0 + r);
      G[static_cast<std::size_t>(i)] =
          (g[static_cast<std::size_t>(i)] + r * G[static_cast<std::size_t>(i) - 1]) / (1.0 + r);
    }
    Geometry free = geom;
    free.boundary = BoundaryKind::none;
    const double birth_e = trap_inner(beta, GridFunction(free, E));
    const double birth_g = trap_inner(beta, GridFunction(free, G));
    const double denom = 1.0 - birth_e;
    if (!(denom > 1e-12)) {
      throw SolverError("transport resolve: birth closure degenerate", denom, 0);
    }
    const double u0 = birth_g / denom;
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      u[static_cast<std::size_t>(i)] =
          u0 * E[static_cast<std::size_t>(i)] + G[static_cast<std::size_t>(i)];
    }
    return GridFunction(geom, std::move(u));
  };
  op.apply = [geom](const GridFunction& u) {
    check_input(geom, u, "transport apply");
    const int n = geom.nodes[0];
    const double h = geom.spacing(0);
    std::vector<double> out(static_cast<std::size_t>(n));
    out[0] = (u[1] - u[0]) / h;
    for (int i = 1; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          (u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(i) - 1]) / h;
    }
    Geometry free = geom;
    free.boundary = BoundaryKind::none;
    return GridFunction(free, std::move(out));
  };
  op.in_domain = [geom, beta](const GridFunction& u) {
    if (!compatible(geom, u.geometry())) return false;
    Geometry free = geom;
    free.boundary = BoundaryKind::none;
    const double birth = trap_inner(beta, GridFunction(free, u.values()));
    return std::abs(u[0] - birth) <= 1e-9 * (1.0 + u.sup_norm());
  };
  return op;
}

ResolventOracle make_diagonal(const DiagonalSpec& spec) {
  spec.geometry.validate();
  const Geometry geom = spec.geometry;
  const double c = spec.coefficient;

  ResolventOracle op;
  op.alpha = std::max(0.0, -c);
  if (c < 0.0) op.lambda_max = 0.9 / (-c);
  op.resolve = [geom, c](double lambda, const GridFunction& g) {
    check_input(geom, g, "diagonal resolve");
    if (!(lambda > 0.0)) throw PreconditionError("diagonal resolve: lambda must be positive");
    const double scale = 1.0 + lambda * c;
    if (!(scale > 0.0)) {
      throw PreconditionError("diagonal resolve: 1 + lambda*coefficient must stay positive");
    }
    std::vector<double> out = g.values();
    for (double& v : out) v /= scale;
    return GridFunction(geom, std::move(out));
  };
  op.apply = [geom, c](const GridFunction& u) {
    check_input(geom, u, "diagonal apply");
    return c * GridFunction(geom, u.values());
  };
  op.in_domain = [geom](const GridFunction& u) {
    return compatible(geom, u.geometry());
  };
  return op;
}

ResolventOracle make_zero_operator(const Geometry& geometry) {
  geometry.validate();
  const Geometry geom = geometry;
  ResolventOracle op;
  op.alpha = 0.0;
  op.resolve = [geom](double lambda, const GridFunction& g) {
    check_input(geom, g, "zero operator resolve");
    if (!(lambda > 0.0)) throw PreconditionError("zero operator resolve: lambda must be positive");
    return GridFunction(geom, g.values());
  };
  op.apply = [geom](const GridFunction& u) {
    check_input(geom, u, "zero operator apply");
    return GridFunction::zeros(geom);
  };
  op.in_domain = [geom](const GridFunction& u) {
    return compatible(geom, u.geometry());
  };
  return op;
}

}  // namespace semiflow
