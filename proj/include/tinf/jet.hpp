#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tinf {

/// Nested dual number of depth k.
///
/// Holds 2^k coefficients indexed by bitmask: coefficient s multiplies the
/// product of the infinitesimals eps_j for every bit j set in s, with
/// eps_j^2 = 0. A depth-k jet is isomorphic to k nested dual numbers
/// D(D(...D(R))), bit j being the j-th nesting (bit 0 innermost). Evaluating
/// a program on jets therefore computes iterated tangent maps exactly.
///
/// Jets of different depths combine by zero-extension of the shallower one.
/// The value coefficient (mask 0) of any result is computed with exactly the
/// same floating-point operations as the plain real computation, regardless
/// of depth.
class Jet {
 public:
  Jet() : c_(1, 0.0) {}
  Jet(double value) : c_(1, value) {}  // NOLINT(google-explicit-constructor)

  /// `coefficients.size()` must be a power of two.
  static Jet from_coefficients(std::vector<double> coefficients);

  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return c_.size(); }
  double value() const noexcept { return c_[0]; }

  /// Coefficient at `mask`; zero beyond the stored depth.
  double operator[](std::size_t mask) const noexcept { return mask < c_.size() ? c_[mask] : 0.0; }
  std::span<const double> coefficients() const noexcept { return c_; }

  /// Zero-extended copy of depth `depth` (>= current depth).
  Jet promoted(int depth) const;

  /// Splits along the outermost bit of a jet of depth `depth` (promoting
  /// first): returns the half without the bit and the half with it.
  static void split(const Jet& j, int depth, Jet& lower, Jet& upper);

  /// Joins two jets of depth <= d into one of depth d+1 with the second
  /// occupying the new outermost bit.
  static Jet join(const Jet& lower, const Jet& upper, int d);

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

 private:
  explicit Jet(std::vector<double> c, int depth) : c_(std::move(c)), depth_(depth) {}

  std::vector<double> c_;
  int depth_ = 0;

  friend Jet taylor(const Jet& a, std::span<const double> scaled_derivatives);
  friend Jet sqrt(const Jet& a);
  friend Jet pow(const Jet& a, double exponent);
  friend Jet pow(const Jet& a, const Jet& b);
};

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
/// Throws EvaluationError for a non-positive value part.
Jet log(const Jet& a);
/// Throws EvaluationError for a negative value part, or a zero value part
/// with non-zero infinitesimal part.
Jet sqrt(const Jet& a);
/// Integer power by repeated squaring; negative exponents divide.
Jet pow(const Jet& a, int exponent);
/// Real power; requires a positive value part unless the exponent is integral.
Jet pow(const Jet& a, double exponent);
/// exp(b * log(a)).
Jet pow(const Jet& a, const Jet& b);

/// Evaluates sum_m d[m] * n^m, n = a - a.value(), by Horner's scheme, where
/// d[m] = f^(m)(a0)/m!. Terms past the depth of `a` vanish identically.
Jet taylor(const Jet& a, std::span<const double> scaled_derivatives);

/// Largest absolute coefficient difference.
double max_abs_diff(const Jet& a, const Jet& b);

}  // namespace tinf
