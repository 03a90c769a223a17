#include "semiflow/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "semiflow/errors.hpp"

namespace semiflow {

std::string to_string(NormTag tag) { return tag == NormTag::sup ? "sup" : "l2"; }

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::none: return "none";
    case BoundaryKind::dirichlet_zero: return "dirichlet-zero";
    case BoundaryKind::nonlocal_birth: return "nonlocal-birth";
  }
  return "?";
}

int Geometry::total_nodes() const {
  int n = nodes[0];
  if (dim == 2) n *= nodes[1];
  return n;
}

double Geometry::spacing(int axis) const { return length[axis] / (nodes[axis] - 1); }

bool Geometry::on_boundary(int flat_index) const {
  int ix = dim == 2 ? flat_index % nodes[0] : flat_index;
  if (ix == 0 || ix == nodes[0] - 1) return true;
  if (dim == 2) {
    int iy = flat_index / nodes[0];
    if (iy == 0 || iy == nodes[1] - 1) return true;
  }
  return false;
}

double Geometry::quad_weight(int flat_index) const {
  int ix = dim == 2 ? flat_index % nodes[0] : flat_index;
  double w = spacing(0) * ((ix == 0 || ix == nodes[0] - 1) ? 0.5 : 1.0);
  if (dim == 2) {
    int iy = flat_index / nodes[0];
    w *= spacing(1) * ((iy == 0 || iy == nodes[1] - 1) ? 0.5 : 1.0);
  }
  return w;
}

void Geometry::validate() const {
  if (dim != 1 && dim != 2)
    throw GeometryError("geometry dim must be 1 or 2, got " + std::to_string(dim));
  for (int a = 0; a < dim; ++a) {
    if (nodes[a] < 3)
      throw GeometryError("axis " + std::to_string(a) + " needs at least 3 nodes, got " +
                          std::to_string(nodes[a]));
    if (!(length[a] > 0.0))
      throw GeometryError("axis " + std::to_string(a) + " length must be positive");
  }
}

bool compatible(const Geometry& a, const Geometry& b) {
  if (a.dim != b.dim || a.norm_tag != b.norm_tag) return false;
  for (int ax = 0; ax < a.dim; ++ax)
    if (a.nodes[ax] != b.nodes[ax] || a.length[ax] != b.length[ax]) return false;
  return true;
}

Geometry scalar_geometry(NormTag tag) {
  Geometry g;
  g.dim = 1;
  g.length = {1.0, 0.0};
  g.nodes = {3, 0};
  g.boundary = BoundaryKind::none;
  g.norm_tag = tag;
  return g;
}

GridFunction::GridFunction(Geometry geometry, std::vector<double> values)
    : geometry_(geometry), values_(std::move(values)) {
  geometry_.validate();
  if (static_cast<int>(values_.size()) != geometry_.total_nodes())
    throw GeometryError("value count " + std::to_string(values_.size()) +
                        " does not match node count " + std::to_string(geometry_.total_nodes()));
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw NonFiniteError("grid function has non-finite value at node " + std::to_string(i));
  if (geometry_.boundary == BoundaryKind::dirichlet_zero) {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (geometry_.on_boundary(static_cast<int>(i)) && values_[i] != 0.0)
        throw GeometryError("dirichlet-zero grid function has nonzero boundary node " +
                            std::to_string(i));
  }
}

GridFunction GridFunction::zeros(const Geometry& geometry) {
  return GridFunction(geometry, std::vector<double>(geometry.total_nodes(), 0.0));
}

GridFunction GridFunction::constant(const Geometry& geometry, double value) {
  return GridFunction(geometry, std::vector<double>(geometry.total_nodes(), value));
}

GridFunction GridFunction::scalar(double value, NormTag tag) {
  return constant(scalar_geometry(tag), value);
}

GridFunction GridFunction::sample(const Geometry& geometry,
                                  const std::function<double(double, double)>& fn) {
  std::vector<double> v(geometry.total_nodes());
  int nx = geometry.nodes[0];
  for (int i = 0; i < geometry.total_nodes(); ++i) {
    double x = geometry.coord(0, geometry.dim == 2 ? i % nx : i);
    double y = geometry.dim == 2 ? geometry.coord(1, i / nx) : 0.0;
    v[i] = fn(x, y);
    // Snap roundoff at pinned boundary nodes; genuine violations still throw.
    if (geometry.boundary == BoundaryKind::dirichlet_zero && geometry.on_boundary(i) &&
        std::fabs(v[i]) <= 1e-8)
      v[i] = 0.0;
  }
  return GridFunction(geometry, std::move(v));
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double GridFunction::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

double GridFunction::norm() const {
  return geometry_.norm_tag == NormTag::sup ? sup_norm() : l2_norm();
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  return GridFunction(geometry_, std::move(values));
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) v[i] = fn(values_[i]);
  Geometry g = geometry_;
  g.boundary = BoundaryKind::none;
  return GridFunction(g, std::move(v));
}

void require_compatible(const GridFunction& a, const GridFunction& b, const char* where) {
  if (!compatible(a.geometry(), b.geometry()))
    throw GeometryError(std::string(where) + ": incompatible geometries (" +
                        std::to_string(a.size()) + " nodes, " + to_string(a.geometry().norm_tag) +
                        " vs " + std::to_string(b.size()) + " nodes, " +
                        to_string(b.geometry().norm_tag) + ")");
}

namespace {

Geometry merged_geometry(const GridFunction& a, const GridFunction& b) {
  Geometry g = a.geometry();
  if (b.geometry().boundary != g.boundary) g.boundary = BoundaryKind::none;
  return g;
}

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_compatible(a, b, "add");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return GridFunction(merged_geometry(a, b), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_compatible(a, b, "subtract");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return GridFunction(merged_geometry(a, b), std::move(v));
}

GridFunction operator*(double a, const GridFunction& x) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * x[i];
  return GridFunction(x.geometry(), std::move(v));
}

GridFunction axpy(const GridFunction& x, double a, const GridFunction& y) {
  require_compatible(x, y, "axpy");
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i] + a * y[i];
  return GridFunction(merged_geometry(x, y), std::move(v));
}

double dot(const GridFunction& a, const GridFunction& b) {
  require_compatible(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double trap_integral(const GridFunction& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += f.geometry().quad_weight(static_cast<int>(i)) * f[i];
  return s;
}

double trap_inner(const GridFunction& a, const GridFunction& b) {
  require_compatible(a, b, "trap_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a.geometry().quad_weight(static_cast<int>(i)) * a[i] * b[i];
  return s;
}

}  // namespace semiflow
