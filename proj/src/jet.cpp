#include "tinf/jet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "tinf/errors.hpp"

namespace tinf {

namespace {

int depth_of(std::size_t size) {
  if (size == 0 || !std::has_single_bit(size)) {
    throw DimensionError("jet coefficient count must be a power of two, got " + std::to_string(size));
  }
  return std::countr_zero(size);
}

// c[s] = sum over submask pairs {t, s ^ t}, t < s ^ t ascending, of
// a[t] b[s ^ t] + a[s ^ t] b[t]. Summation order depends only on s.
std::vector<double> subset_product(const Jet& a, const Jet& b, int depth) {
  const std::size_t size = std::size_t{1} << depth;
  std::vector<double> c(size, 0.0);
  c[0] = a[0] * b[0];
  for (std::size_t s = 1; s < size; ++s) {
    double acc = 0.0;
    std::size_t t = 0;
    do {
      const std::size_t u = s ^ t;
      if (t < u) acc += a[t] * b[u] + a[u] * b[t];
      t = (t - s) & s;
    } while (t != 0);
    c[s] = acc;
  }
  return c;
}

// Out of line: never fused into sincos.
[[gnu::noinline]] double scalar_sin(double x) { return std::sin(x); }
[[gnu::noinline]] double scalar_cos(double x) { return std::cos(x); }

}  // namespace

Jet Jet::from_coefficients(std::vector<double> coefficients) {
  const int d = depth_of(coefficients.size());
  return Jet(std::move(coefficients), d);
}

Jet Jet::promoted(int depth) const {
  if (depth <= depth_) return *this;
  std::vector<double> c(std::size_t{1} << depth, 0.0);
  std::copy(c_.begin(), c_.end(), c.begin());
  return Jet(std::move(c), depth);
}

void Jet::split(const Jet& j, int depth, Jet& lower, Jet& upper) {
  if (depth < 1) throw OrderError("cannot split a depth-0 jet");
  const std::size_t half = std::size_t{1} << (depth - 1);
  std::vector<double> lo(half), hi(half);
  for (std::size_t s = 0; s < half; ++s) {
    lo[s] = j[s];
    hi[s] = j[s + half];
  }
  lower = Jet(std::move(lo), depth - 1);
  upper = Jet(std::move(hi), depth - 1);
}

Jet Jet::join(const Jet& lower, const Jet& upper, int d) {
  const std::size_t half = std::size_t{1} << d;
  std::vector<double> c(2 * half);
  for (std::size_t s = 0; s < half; ++s) {
    c[s] = lower[s];
    c[s + half] = upper[s];
  }
  return Jet(std::move(c), d + 1);
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.depth_ > depth_) *this = promoted(o.depth_);
  for (std::size_t s = 0; s < o.c_.size(); ++s) c_[s] += o.c_[s];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.depth_ > depth_) *this = promoted(o.depth_);
  for (std::size_t s = 0; s < o.c_.size(); ++s) c_[s] -= o.c_[s];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (b.depth_ == 0) return a * b.c_[0];
  if (a.depth_ == 0) return b * a.c_[0];
  const int d = std::max(a.depth_, b.depth_);
  return Jet(subset_product(a, b, d), d);
}

Jet operator/(const Jet& a, const Jet& b) {
  const double b0 = b.c_[0];
  if (b0 == 0.0) throw EvaluationError("division by zero");
  const int d = std::max(a.depth_, b.depth_);
  const std::size_t size = std::size_t{1} << d;
  std::vector<double> c(size, 0.0);
  c[0] = a[0] / b0;
  // Forward substitution of c * b = a over masks in increasing order.
  for (std::size_t s = 1; s < size; ++s) {
    double acc = a[s];
    for (std::size_t t = s; t != 0; t = (t - 1) & s) acc -= b[t] * c[s ^ t];
    c[s] = acc / b0;
  }
  return Jet(std::move(c), d);
}

Jet taylor(const Jet& a, std::span<const double> d) {
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(a.depth()), d.size() - 1);
  Jet nil = a;
  nil.c_[0] = 0.0;
  Jet r(d[top]);
  for (std::size_t m = top; m-- > 0;) {
    r = nil * r;
    r.c_[0] += d[m];
  }
  return r;
}

Jet sin(const Jet& a) {
  const double s = scalar_sin(a.value()), c = scalar_cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  std::vector<double> d(static_cast<std::size_t>(a.depth()) + 1);
  double fact = 1.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (m > 0) fact *= static_cast<double>(m);
    d[m] = cycle[m % 4] / fact;
  }
  return taylor(a, d);
}

Jet cos(const Jet& a) {
  const double s = scalar_sin(a.value()), c = scalar_cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  std::vector<double> d(static_cast<std::size_t>(a.depth()) + 1);
  double fact = 1.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (m > 0) fact *= static_cast<double>(m);
    d[m] = cycle[m % 4] / fact;
  }
  return taylor(a, d);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  std::vector<double> d(static_cast<std::size_t>(a.depth()) + 1);
  double fact = 1.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (m > 0) fact *= static_cast<double>(m);
    d[m] = e / fact;
  }
  return taylor(a, d);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw EvaluationError("log of non-positive value " + std::to_string(x));
  std::vector<double> d(static_cast<std::size_t>(a.depth()) + 1);
  d[0] = std::log(x);
  double xm = 1.0;
  for (std::size_t m = 1; m < d.size(); ++m) {
    xm *= x;
    d[m] = ((m % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(m) * xm);
  }
  return taylor(a, d);
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (x < 0.0) throw EvaluationError("sqrt of negative value " + std::to_string(x));
  const std::size_t size = a.size();
  std::vector<double> c(size, 0.0);
  c[0] = std::sqrt(x);
  if (size > 1) {
    const bool nilpotent_zero = std::all_of(a.c_.begin() + 1, a.c_.end(), [](double v) { return v == 0.0; });
    if (nilpotent_zero) return Jet(std::move(c), a.depth_);
    if (x == 0.0) throw EvaluationError("sqrt is not differentiable at 0");
    for (std::size_t s = 1; s < size; ++s) {
      double acc = a.c_[s];
      for (std::size_t t = (s - 1) & s; t != 0; t = (t - 1) & s) acc -= c[t] * c[s ^ t];
      c[s] = acc / (2.0 * c[0]);
    }
  }
  return Jet(std::move(c), a.depth_);
}

Jet pow(const Jet& a, int exponent) {
  if (exponent < 0) {
    if (a.value() == 0.0) throw EvaluationError("negative power of zero");
    return Jet(1.0) / pow(a, -exponent);
  }
  Jet result(1.0);
  Jet base = a;
  bool first = true;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1u) {
      result = first ? base : result * base;
      first = false;
    }
    if (e > 1) base = base * base;
  }
  return result;
}

Jet pow(const Jet& a, double exponent) {
  if (std::nearbyint(exponent) == exponent && std::abs(exponent) <= 1024.0) {
    Jet r = pow(a, static_cast<int>(exponent));
    r.c_[0] = std::pow(a.value(), exponent);
    return r;
  }
  const double x = a.value();
  if (x < 0.0) throw EvaluationError("non-integer power of negative value " + std::to_string(x));
  if (x == 0.0) {
    const bool nilpotent_zero = std::all_of(a.coefficients().begin() + 1, a.coefficients().end(),
                                            [](double v) { return v == 0.0; });
    if (!nilpotent_zero || exponent < 0.0) throw EvaluationError("non-integer power is not differentiable at 0");
    return Jet(0.0).promoted(a.depth());
  }
  std::vector<double> d(static_cast<std::size_t>(a.depth()) + 1);
  double binom = 1.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    if (m > 0) binom *= (exponent - static_cast<double>(m - 1)) / static_cast<double>(m);
    d[m] = binom * std::pow(x, exponent - static_cast<double>(m));
  }
  return taylor(a, d);
}

Jet pow(const Jet& a, const Jet& b) {
  const bool constant = std::all_of(b.coefficients().begin() + 1, b.coefficients().end(), [](double v) { return v == 0.0; });
  if (constant) return pow(a, b.value()).promoted(std::max(a.depth(), b.depth()));
  Jet r = exp(b * log(a));
  r.c_[0] = std::pow(a.value(), b.value());
  return r;
}

double max_abs_diff(const Jet& a, const Jet& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double m = 0.0;
  for (std::size_t s = 0; s < n; ++s) m = std::max(m, std::abs(a[s] - b[s]));
  return m;
}

}  // namespace tinf
