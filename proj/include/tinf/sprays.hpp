#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tinf/lifts.hpp"
#include "tinf/report.hpp"

namespace tinf {

/// Homogeneity metadata of a semispray coefficient.
struct SprayFlags {
  bool claimed_homogeneous = false;
  std::vector<double> verified_lambdas;
};

/// Semispray on T^(level-1) M, given by its coefficient G.
///
/// G takes (x, y), the two halves of an order `level` element, to G(x, y)
/// with 2^(level-1) * base_dim components. The induced field has fiber
/// (y, -2 G(x, y)).
class Semispray {
 public:
  Semispray(int level, int base_dim, SmoothMap coefficient, std::string name = {}, SprayFlags flags = {});

  int level() const noexcept { return level_; }
  int base_dim() const noexcept { return base_dim_; }
  std::size_t dim() const noexcept { return g_.in_dim(); }
  const SmoothMap& coefficient() const noexcept { return g_; }
  const std::string& name() const noexcept { return name_; }
  const SprayFlags& flags() const noexcept { return flags_; }

 private:
  int level_;
  int base_dim_;
  SmoothMap g_;
  std::string name_;
  SprayFlags flags_;
};

VectorField semispray_to_field(const Semispray& s);

/// Checks kappa o V = V and D pi o V = id at `samples` random points of
/// the chart of T^level M. The report deviation is the larger of the two.
CheckReport is_semispray(const VectorField& v, int samples, double tol = 1e-12, std::uint64_t seed = 42);

/// S^c with coefficient (G^v, G^c). OrderError past `max_order`.
Semispray complete_lift_spray(const Semispray& s, int max_order = kDefaultMaxOrder);

/// `times`-fold complete lift.
Semispray iterated_complete_lift(const Semispray& s, int times, int max_order = kDefaultMaxOrder);

/// max |G(x, lambda y) - lambda^2 G(x, y)| over samples and lambdas.
CheckReport homogeneity_check(const Semispray& s, const std::vector<double>& lambdas, int samples, double tol = 1e-10,
                              std::uint64_t seed = 42);

/// (x, y) -> (y, -2 G(x, y)).
SmoothMap geodesic_rhs(const Semispray& s);

/// Spray catalog.
namespace catalog {

/// G = 0 on R^n.
Semispray flat(int base_dim);
/// Round 2-sphere in one stereographic chart:
/// G^k = -(2 / (1 + |x|^2)) (<x, y> y^k - |y|^2 x^k / 2).
Semispray sphere();
/// G^k = 1/2 gamma[k][i][j] y^i y^j from a constant table of size n^3.
Semispray quadratic(int base_dim, const std::vector<double>& gamma);
/// Catalog lookup by name ("flat", "sphere"); DimensionError on a
/// dimension the entry does not support, ConfigError on an unknown name.
Semispray by_name(const std::string& name, int base_dim);

}  // namespace catalog

/// Level-1 semispray from one coefficient expression per coordinate over
/// x0..x{2n-1} (positions first, then velocities).
Semispray spray_from_expressions(int base_dim, const std::vector<std::string>& coefficients, std::string name = {},
                                 SprayFlags flags = {});

/// Chart speed g(y, y) of the stereographic sphere metric 4 / (1 + |x|^2)^2.
double sphere_speed(std::span<const double> x, std::span<const double> y);

}  // namespace tinf
