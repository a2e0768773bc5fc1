#include "tinf/lifts.hpp"

#include "tinf/errors.hpp"

namespace tinf {

namespace {

std::size_t chart_dim(int level, int base_dim) { return (std::size_t{1} << level) * static_cast<std::size_t>(base_dim); }

// Upper half of a 2m-dimensional output.
SmoothMap upper_half(std::size_t two_m) {
  std::vector<int> idx(two_m / 2);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(two_m / 2 + i);
  return select(two_m, std::move(idx));
}

// Flat indices of the (x, X) quarters of a level r+1 chart, or of x for r = 0.
std::vector<int> base_and_outer_fiber(int r, int n) {
  const std::size_t full = chart_dim(r + 1, n);
  std::vector<int> idx;
  if (r == 0) {
    for (int c = 0; c < n; ++c) idx.push_back(c);
    return idx;
  }
  const std::size_t q = full / 4;
  for (std::size_t i = 0; i < q; ++i) idx.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < q; ++i) idx.push_back(static_cast<int>(2 * q + i));
  return idx;
}

// (y, Y) quarters, or y for r = 0.
std::vector<int> inner_and_mixed_fiber(int r, int n) {
  const std::size_t full = chart_dim(r + 1, n);
  std::vector<int> idx;
  if (r == 0) {
    for (int c = 0; c < n; ++c) idx.push_back(n + c);
    return idx;
  }
  const std::size_t q = full / 4;
  for (std::size_t i = 0; i < q; ++i) idx.push_back(static_cast<int>(q + i));
  for (std::size_t i = 0; i < q; ++i) idx.push_back(static_cast<int>(3 * q + i));
  return idx;
}

std::vector<double> gather(std::span<const double> v, const std::vector<int>& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[static_cast<std::size_t>(idx[i])];
  return out;
}

}  // namespace

ScalarFunction::ScalarFunction(int level, int base_dim, SmoothMap map)
    : level_(level), base_dim_(base_dim), map_(std::move(map)) {
  if (level < 0) throw OrderError("function level must be non-negative");
  if (map_.in_dim() != chart_dim(level, base_dim) || map_.out_dim() != 1) {
    throw DimensionError("scalar function on level " + std::to_string(level) + " over R^" + std::to_string(base_dim) +
                         " needs a map R^" + std::to_string(chart_dim(level, base_dim)) + " -> R");
  }
}

double ScalarFunction::operator()(const TangentElement& xi) const {
  if (xi.order() != level_ || xi.base_dim() != base_dim_) throw DimensionError("scalar function: element shape mismatch");
  return map_(xi.flat())[0];
}

VectorField::VectorField(int level, int base_dim, SmoothMap fiber_map, std::string name)
    : level_(level), base_dim_(base_dim), fiber_map_(std::move(fiber_map)), name_(std::move(name)) {
  if (level < 0) throw OrderError("field level must be non-negative");
  const std::size_t d = chart_dim(level, base_dim);
  if (fiber_map_.in_dim() != d || fiber_map_.out_dim() != d) {
    throw DimensionError("vector field on level " + std::to_string(level) + " over R^" + std::to_string(base_dim) +
                         " needs a fiber map R^" + std::to_string(d) + " -> R^" + std::to_string(d));
  }
}

void VectorField::check(const TangentElement& xi) const {
  if (xi.order() != level_ || xi.base_dim() != base_dim_) {
    throw DimensionError("vector field '" + name_ + "': expected an order " + std::to_string(level_) +
                         " element over R^" + std::to_string(base_dim_));
  }
}

TangentElement VectorField::fiber(const TangentElement& xi) const {
  check(xi);
  return TangentElement(level_, base_dim_, fiber_map_(xi.flat()));
}

TangentElement VectorField::section(const TangentElement& xi) const { return join(xi, fiber(xi)); }

SmoothMap VectorField::section_map() const { return concat({identity(dim()), fiber_map_}); }

SmoothMap vertical_lift_map(const SmoothMap& f, int level, int base_dim) {
  return compose(f, compose(proj_map(level + 1, base_dim), kappa_map(level + 1, base_dim)));
}

SmoothMap complete_lift_map(const SmoothMap& f, int level, int base_dim) {
  return compose(upper_half(2 * f.out_dim()), compose(tangent(f), kappa_map(level + 1, base_dim)));
}

ScalarFunction vertical_lift_function(const ScalarFunction& f) {
  return ScalarFunction(f.level() + 1, f.base_dim(), vertical_lift_map(f.map(), f.level(), f.base_dim()));
}

ScalarFunction complete_lift_function(const ScalarFunction& f) {
  return ScalarFunction(f.level() + 1, f.base_dim(), complete_lift_map(f.map(), f.level(), f.base_dim()));
}

VectorField vertical_lift_field(const VectorField& a, int max_order) {
  const int r = a.level();
  const int n = a.base_dim();
  if (r + 1 > max_order) throw OrderError("vertical lift would exceed the maximum order " + std::to_string(max_order));
  const std::size_t d = chart_dim(r, n);
  // Fiber values at (x, X), then spread as (0, A, 0, B); for r = 0 as (0, A).
  const SmoothMap at_base = compose(a.fiber_map(), select(chart_dim(r + 1, n), base_and_outer_fiber(r, n)));
  std::vector<int> layout;
  if (r == 0) {
    layout.assign(d, -1);
    for (std::size_t i = 0; i < d; ++i) layout.push_back(static_cast<int>(i));
  } else {
    const std::size_t q = d / 2;
    for (std::size_t i = 0; i < q; ++i) layout.push_back(-1);
    for (std::size_t i = 0; i < q; ++i) layout.push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < q; ++i) layout.push_back(-1);
    for (std::size_t i = 0; i < q; ++i) layout.push_back(static_cast<int>(q + i));
  }
  return VectorField(r + 1, n, compose(select(d, std::move(layout)), at_base), a.name() + "^v");
}

VectorField complete_lift_field(const VectorField& a, int max_order) {
  const int r = a.level();
  const int n = a.base_dim();
  if (r + 1 > max_order) throw OrderError("complete lift would exceed the maximum order " + std::to_string(max_order));
  // T^(r+1) --kappa--> T^(r+1) --DA--> T^(r+2) --kappa--> T^(r+2) --D kappa--> T^(r+2) --fiber--> R^(2^(r+1) n)
  SmoothMap m = kappa_map(r + 1, n);
  m = compose(tangent(a.section_map()), m);
  m = compose(kappa_map(r + 2, n), m);
  m = compose(tangent(kappa_map(r + 1, n)), m);
  m = compose(upper_half(chart_dim(r + 2, n)), m);
  return VectorField(r + 1, n, m, a.name() + "^c");
}

VectorField iterated_complete_lift(const VectorField& x, int times, int max_order) {
  if (times < 0) throw OrderError("lift count must be non-negative");
  if (x.level() + times > max_order) {
    throw OrderError("iterated lift to level " + std::to_string(x.level() + times) + " exceeds the maximum order " +
                     std::to_string(max_order));
  }
  VectorField r = x;
  for (int i = 0; i < times; ++i) r = complete_lift_field(r, max_order);
  return r;
}

namespace local_form {

std::vector<double> jacobian(const SmoothMap& f, std::span<const double> x) {
  const std::size_t m = f.in_dim(), p = f.out_dim();
  std::vector<double> jac(p * m);
  std::vector<Jet> in(x.begin(), x.end());
  for (std::size_t k = 0; k < m; ++k) {
    in[k] = Jet::from_coefficients({x[k], 1.0});
    const std::vector<Jet> out = f(std::span<const Jet>(in));
    for (std::size_t i = 0; i < p; ++i) jac[i * m + k] = out[i][1];
    in[k] = Jet(x[k]);
  }
  return jac;
}

namespace {

std::vector<double> mat_vec(const std::vector<double>& jac, std::size_t rows, std::span<const double> v) {
  const std::size_t cols = v.size();
  std::vector<double> out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) out[i] += jac[i * cols + k] * v[k];
  return out;
}

void check_lifted(const TangentElement& xi, int level, int n) {
  if (xi.order() != level + 1 || xi.base_dim() != n) throw DimensionError("local form: element shape mismatch");
}

}  // namespace

double vertical_lift_function(const ScalarFunction& f, const TangentElement& xi) {
  check_lifted(xi, f.level(), f.base_dim());
  return f.map()(gather(xi.flat(), base_and_outer_fiber(f.level(), f.base_dim())))[0];
}

double complete_lift_function(const ScalarFunction& f, const TangentElement& xi) {
  check_lifted(xi, f.level(), f.base_dim());
  const std::vector<double> at = gather(xi.flat(), base_and_outer_fiber(f.level(), f.base_dim()));
  const std::vector<double> dir = gather(xi.flat(), inner_and_mixed_fiber(f.level(), f.base_dim()));
  return mat_vec(jacobian(f.map(), at), 1, dir)[0];
}

TangentElement vertical_lift_field(const VectorField& a, const TangentElement& xi) {
  const int r = a.level(), n = a.base_dim();
  check_lifted(xi, r, n);
  const std::vector<double> v = a.fiber_map()(gather(xi.flat(), base_and_outer_fiber(r, n)));
  TangentElement out(r + 1, n);
  auto flat = out.flat();
  if (r == 0) {
    std::copy(v.begin(), v.end(), flat.begin() + static_cast<std::ptrdiff_t>(v.size()));
  } else {
    const std::size_t q = v.size() / 2;
    std::copy(v.begin(), v.begin() + q, flat.begin() + q);
    std::copy(v.begin() + q, v.end(), flat.begin() + 3 * q);
  }
  return out;
}

TangentElement complete_lift_field(const VectorField& a, const TangentElement& xi) {
  const int r = a.level(), n = a.base_dim();
  check_lifted(xi, r, n);
  const std::vector<double> at = gather(xi.flat(), base_and_outer_fiber(r, n));
  const std::vector<double> dir = gather(xi.flat(), inner_and_mixed_fiber(r, n));
  const std::vector<double> v = a.fiber_map()(at);
  const std::vector<double> dv = mat_vec(jacobian(a.fiber_map(), at), v.size(), dir);
  std::vector<double> out;
  if (r == 0) {
    out = v;
    out.insert(out.end(), dv.begin(), dv.end());
  } else {
    // (A, dA(y, Y), B, dB(y, Y))
    const std::size_t q = v.size() / 2;
    out.insert(out.end(), v.begin(), v.begin() + q);
    out.insert(out.end(), dv.begin(), dv.begin() + q);
    out.insert(out.end(), v.begin() + q, v.end());
    out.insert(out.end(), dv.begin() + q, dv.end());
  }
  return TangentElement(r + 1, n, std::move(out));
}

}  // namespace local_form

}  // namespace tinf
