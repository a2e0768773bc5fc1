#pragma once

#include <string>
#include <vector>

#include "tinf/smooth_map.hpp"
#include "tinf/tangent.hpp"

namespace tinf {

/// Smooth real function on the chart of T^r M.
class ScalarFunction {
 public:
  /// `map` must have 2^level * base_dim inputs and one output.
  ScalarFunction(int level, int base_dim, SmoothMap map);

  int level() const noexcept { return level_; }
  int base_dim() const noexcept { return base_dim_; }
  const SmoothMap& map() const noexcept { return map_; }

  double operator()(const TangentElement& xi) const;

 private:
  int level_;
  int base_dim_;
  SmoothMap map_;
};

/// Vector field on T^r M, stored by its fiber components: the section
/// T^r M -> T^(r+1) M sends xi to the element with base half xi and fiber
/// half fiber_map(xi).
class VectorField {
 public:
  VectorField(int level, int base_dim, SmoothMap fiber_map, std::string name = {});

  int level() const noexcept { return level_; }
  int base_dim() const noexcept { return base_dim_; }
  std::size_t dim() const noexcept { return fiber_map_.in_dim(); }
  const SmoothMap& fiber_map() const noexcept { return fiber_map_; }
  const std::string& name() const noexcept { return name_; }

  /// Fiber components at xi, as an element of the same order.
  TangentElement fiber(const TangentElement& xi) const;
  /// Full section value at xi, one order up.
  TangentElement section(const TangentElement& xi) const;
  /// The section as a smooth map R^dim -> R^(2 dim).
  SmoothMap section_map() const;

 private:
  void check(const TangentElement& xi) const;

  int level_;
  int base_dim_;
  SmoothMap fiber_map_;
  std::string name_;
};

/// f^v = f o pi_r o kappa_(r+1); locally (x, y, X, Y) -> f(x, X).
ScalarFunction vertical_lift_function(const ScalarFunction& f);
/// f^c = df o kappa_(r+1); locally d_1 f(x, X) y + d_2 f(x, X) Y.
ScalarFunction complete_lift_function(const ScalarFunction& f);

/// Vector-valued versions for a map on the chart of T^level M with
/// arbitrary output dimension, applied componentwise.
SmoothMap vertical_lift_map(const SmoothMap& f, int level, int base_dim);
SmoothMap complete_lift_map(const SmoothMap& f, int level, int base_dim);

/// Vertical lift, built from its local form (0, A(x, X), 0, B(x, X)).
VectorField vertical_lift_field(const VectorField& a, int max_order = kDefaultMaxOrder);

/// Complete lift A^c = D kappa_(r+1) o kappa_(r+2) o DA o kappa_(r+1),
/// evaluated functorially through jets. OrderError past `max_order`.
VectorField complete_lift_field(const VectorField& a, int max_order = kDefaultMaxOrder);

/// X^(c_i): `times`-fold complete lift.
VectorField iterated_complete_lift(const VectorField& x, int times, int max_order = kDefaultMaxOrder);

/// Closed-form local formulas, computed from explicit Jacobians of the
/// unlifted object. Independent of the functorial path above; used to
/// cross-check it.
namespace local_form {

double vertical_lift_function(const ScalarFunction& f, const TangentElement& xi);
double complete_lift_function(const ScalarFunction& f, const TangentElement& xi);
TangentElement vertical_lift_field(const VectorField& a, const TangentElement& xi);
TangentElement complete_lift_field(const VectorField& a, const TangentElement& xi);

/// Jacobian of f at x, row-major (out_dim x in_dim), one seeded column at a time.
std::vector<double> jacobian(const SmoothMap& f, std::span<const double> x);

}  // namespace local_form

}  // namespace tinf
