#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace semiflow {

enum class NormTag { sup, l2 };
enum class BoundaryKind { none, dirichlet_zero, nonlocal_birth };

std::string to_string(NormTag tag);
std::string to_string(BoundaryKind kind);

struct Geometry {
  int dim = 1;
  std::array<double, 2> length{1.0, 0.0};
  std::array<int, 2> nodes{3, 0};
  BoundaryKind boundary = BoundaryKind::none;
  NormTag norm_tag = NormTag::sup;

  int total_nodes() const;
  double spacing(int axis) const;
  double coord(int axis, int index) const { return spacing(axis) * index; }
  bool on_boundary(int flat_index) const;
  // Trapezoid weight of a node, the product of per-axis end-halved cell sizes.
  double quad_weight(int flat_index) const;
  void validate() const;

  bool operator==(const Geometry&) const = default;
};

// True when the two geometries describe the same vector of nodes (dims,
// lengths, node counts, norm tag); boundary kinds may differ.
bool compatible(const Geometry& a, const Geometry& b);

Geometry scalar_geometry(NormTag tag = NormTag::sup);

class GridFunction {
 public:
  GridFunction(Geometry geometry, std::vector<double> values);

  static GridFunction zeros(const Geometry& geometry);
  static GridFunction constant(const Geometry& geometry, double value);
  // Scalar systems ride on a three-node constant profile; sup norm and
  // componentwise operators then coincide with plain scalar arithmetic.
  static GridFunction scalar(double value, NormTag tag = NormTag::sup);
  static GridFunction sample(const Geometry& geometry,
                             const std::function<double(double, double)>& fn);

  const Geometry& geometry() const { return geometry_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double scalar_value() const { return values_[0]; }

  double norm() const;
  double sup_norm() const;
  double l2_norm() const;

  GridFunction with_values(std::vector<double> values) const;
  GridFunction map(const std::function<double(double)>& fn) const;

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(double a, const GridFunction& x);

 private:
  Geometry geometry_;
  std::vector<double> values_;
};

// x + a * y.
GridFunction axpy(const GridFunction& x, double a, const GridFunction& y);

// Unweighted inner product matching the discrete l2 norm.
double dot(const GridFunction& a, const GridFunction& b);

// Trapezoid quadrature over the domain.
double trap_integral(const GridFunction& f);
double trap_inner(const GridFunction& a, const GridFunction& b);

void require_compatible(const GridFunction& a, const GridFunction& b, const char* where);

}  // namespace semiflow
