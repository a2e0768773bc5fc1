#include "tinf/sprays.hpp"

#include <cmath>

#include "tinf/errors.hpp"

namespace tinf {

namespace {

std::size_t chart_dim(int level, int n) { return (std::size_t{1} << level) * static_cast<std::size_t>(n); }

}  // namespace

Semispray::Semispray(int level, int base_dim, SmoothMap coefficient, std::string name, SprayFlags flags)
    : level_(level), base_dim_(base_dim), g_(std::move(coefficient)), name_(std::move(name)), flags_(std::move(flags)) {
  if (level < 1) throw OrderError("semispray level must be at least 1");
  if (base_dim < 1) throw DimensionError("base dimension must be positive");
  const std::size_t d = chart_dim(level, base_dim);
  if (g_.in_dim() != d || g_.out_dim() != d / 2) {
    throw DimensionError("semispray coefficient on level " + std::to_string(level) + " over R^" +
                         std::to_string(base_dim) + " needs a map R^" + std::to_string(d) + " -> R^" +
                         std::to_string(d / 2));
  }
  if (flags_.claimed_homogeneous && flags_.verified_lambdas.empty()) {
    flags_.verified_lambdas = {2.0, -1.0, 0.5, 0.0};
  }
}

SmoothMap geodesic_rhs(const Semispray& s) {
  const std::size_t d = s.dim();
  std::vector<int> upper(d / 2);
  for (std::size_t i = 0; i < upper.size(); ++i) upper[i] = static_cast<int>(d / 2 + i);
  return concat({select(d, std::move(upper)), scale(-2.0, s.coefficient())});
}

VectorField semispray_to_field(const Semispray& s) {
  return VectorField(s.level(), s.base_dim(), geodesic_rhs(s), s.name());
}

CheckReport is_semispray(const VectorField& v, int samples, double tol, std::uint64_t seed) {
  if (v.level() < 1) throw OrderError("semispray check needs a field on level >= 1");
  CheckReport rep{"semispray", 0.0, tol, samples};
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const TangentElement xi = random_element(v.level(), v.base_dim(), rng);
    const TangentElement s = v.section(xi);
    rep.record(max_abs_diff(kappa(s), s));
    rep.record(max_abs_diff(tangent_proj(s), xi));
  }
  return rep;
}

Semispray complete_lift_spray(const Semispray& s, int max_order) {
  const int r = s.level();
  if (r + 1 > max_order) throw OrderError("spray lift would exceed the maximum order " + std::to_string(max_order));
  SmoothMap g = concat({vertical_lift_map(s.coefficient(), r, s.base_dim()),
                        complete_lift_map(s.coefficient(), r, s.base_dim())});
  return Semispray(r + 1, s.base_dim(), std::move(g), s.name() + "^c", s.flags());
}

Semispray iterated_complete_lift(const Semispray& s, int times, int max_order) {
  if (times < 0) throw OrderError("lift count must be non-negative");
  if (s.level() + times > max_order) {
    throw OrderError("iterated lift to level " + std::to_string(s.level() + times) + " exceeds the maximum order " +
                     std::to_string(max_order));
  }
  Semispray r = s;
  for (int i = 0; i < times; ++i) r = complete_lift_spray(r, max_order);
  return r;
}

CheckReport homogeneity_check(const Semispray& s, const std::vector<double>& lambdas, int samples, double tol,
                              std::uint64_t seed) {
  if (lambdas.empty()) throw ConfigError("homogeneity check needs at least one lambda");
  CheckReport rep{"homogeneity", 0.0, tol, samples};
  Rng rng(seed);
  const std::size_t half = s.dim() / 2;
  for (int k = 0; k < samples; ++k) {
    const TangentElement xi = random_element(s.level(), s.base_dim(), rng);
    const std::vector<double> g = s.coefficient()(xi.flat());
    for (double lambda : lambdas) {
      std::vector<double> scaled = xi.values();
      for (std::size_t i = half; i < scaled.size(); ++i) scaled[i] *= lambda;
      const std::vector<double> gl = s.coefficient()(scaled);
      for (std::size_t i = 0; i < g.size(); ++i) rep.record(std::abs(gl[i] - lambda * lambda * g[i]));
    }
  }
  return rep;
}

namespace catalog {

Semispray flat(int base_dim) {
  if (base_dim < 1) throw DimensionError("base dimension must be positive");
  const std::size_t n = static_cast<std::size_t>(base_dim);
  return Semispray(1, base_dim, zero(2 * n, n), "flat", SprayFlags{true, {}});
}

Semispray sphere() {
  const Expr x0 = Expr::variable(0), x1 = Expr::variable(1);
  const Expr y0 = Expr::variable(2), y1 = Expr::variable(3);
  const Expr conformal = Expr(2.0) / (Expr(1.0) + x0 * x0 + x1 * x1);
  const Expr xy = x0 * y0 + x1 * y1;
  const Expr half_yy = Expr(0.5) * (y0 * y0 + y1 * y1);
  std::vector<Expr> g = {-(conformal * (xy * y0 - half_yy * x0)), -(conformal * (xy * y1 - half_yy * x1))};
  return Semispray(1, 2, from_expressions(4, std::move(g)), "sphere", SprayFlags{true, {}});
}

Semispray quadratic(int base_dim, const std::vector<double>& gamma) {
  if (base_dim < 1) throw DimensionError("base dimension must be positive");
  const std::size_t n = static_cast<std::size_t>(base_dim);
  if (gamma.size() != n * n * n) {
    throw DimensionError("quadratic spray needs " + std::to_string(n * n * n) + " coefficients, got " +
                         std::to_string(gamma.size()));
  }
  std::vector<Expr> g;
  for (std::size_t k = 0; k < n; ++k) {
    Expr sum(0.0);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double c = gamma[(k * n + i) * n + j];
        if (c == 0.0) continue;
        const Expr term = Expr(0.5 * c) * Expr::variable(n + i) * Expr::variable(n + j);
        sum = any ? sum + term : term;
        any = true;
      }
    }
    g.push_back(sum);
  }
  return Semispray(1, base_dim, from_expressions(2 * n, std::move(g)), "quadratic", SprayFlags{true, {}});
}

Semispray by_name(const std::string& name, int base_dim) {
  if (name == "flat") return flat(base_dim);
  if (name == "sphere") {
    if (base_dim != 2) throw DimensionError("the sphere spray lives on a 2-dimensional chart");
    return sphere();
  }
  throw ConfigError("unknown catalog spray '" + name + "'");
}

}  // namespace catalog

Semispray spray_from_expressions(int base_dim, const std::vector<std::string>& coefficients, std::string name,
                                 SprayFlags flags) {
  if (base_dim < 1) throw DimensionError("base dimension must be positive");
  const std::size_t n = static_cast<std::size_t>(base_dim);
  if (coefficients.size() != n) {
    throw DimensionError("spray over R^" + std::to_string(n) + " needs " + std::to_string(n) +
                         " coefficient expressions, got " + std::to_string(coefficients.size()));
  }
  return Semispray(1, base_dim, parse_map(2 * n, coefficients), std::move(name), std::move(flags));
}

double sphere_speed(std::span<const double> x, std::span<const double> y) {
  if (x.size() != 2 || y.size() != 2) throw DimensionError("sphere speed needs 2-vectors");
  const double c = 1.0 + x[0] * x[0] + x[1] * x[1];
  return 4.0 * (y[0] * y[0] + y[1] * y[1]) / (c * c);
}

}  // namespace tinf
