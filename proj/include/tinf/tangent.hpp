#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "tinf/smooth_map.hpp"

namespace tinf {

/// Default cap on the tangent order reached by lifting operations.
inline constexpr int kDefaultMaxOrder = 6;

/// Chart-local point of T^r M over an n-dimensional chart.
///
/// Stores 2^r blocks of n coordinates. Block s sits at offset s*n; bit j of
/// s is set when the component lies in the fiber direction of the j-th
/// application of the tangent functor (bit 0 innermost). For r = 2 the
/// blocks 0..3 are the usual (x, y, X, Y).
///
/// The layout is self-similar: an element of order a+b over R^n has the same
/// flat coordinates as an element of order a over R^(2^b n). In particular
/// the first half of the blocks is the base point in T^(r-1) M and the second
/// half the fiber.
class TangentElement {
 public:
  TangentElement() = default;
  /// Zero element.
  TangentElement(int order, int base_dim);
  /// Throws DimensionError unless flat.size() == 2^order * base_dim.
  TangentElement(int order, int base_dim, std::vector<double> flat);

  int order() const noexcept { return order_; }
  int base_dim() const noexcept { return base_dim_; }
  std::size_t block_count() const noexcept { return std::size_t{1} << order_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> block(std::size_t mask) const;
  std::span<double> block(std::size_t mask);
  std::span<const double> flat() const noexcept { return data_; }
  std::span<double> flat() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  double operator()(std::size_t mask, std::size_t coord) const { return data_[mask * base_dim_ + coord]; }
  double& operator()(std::size_t mask, std::size_t coord) { return data_[mask * base_dim_ + coord]; }

  /// First half of the blocks as an order r-1 element (the base point).
  TangentElement base() const;
  /// Second half of the blocks as an order r-1 element (the fiber part).
  TangentElement fiber() const;

  friend bool operator==(const TangentElement&, const TangentElement&) = default;

 private:
  int order_ = 0;
  int base_dim_ = 1;
  std::vector<double> data_ = {0.0};
};

TangentElement make_element(int order, int base_dim, std::span<const double> flat);

/// Concatenates a base point and a fiber of equal order into order+1.
TangentElement join(const TangentElement& base, const TangentElement& fiber);

/// Canonical involution: transposes the two outermost bits of every block
/// index (swaps the middle quarters). Identity on order 1; OrderError on 0.
TangentElement kappa(const TangentElement& e);

/// Natural projection T^r -> T^(r-1): keeps the blocks whose outermost bit
/// is clear. OrderError on order 0.
TangentElement proj(const TangentElement& e);

/// (j - i)-fold projection from order j to order i.
TangentElement proj_between(int j, int i, const TangentElement& e);

/// Tangent map of the projection, D pi: T(T^r) -> T(T^(r-1)), i.e. proj
/// applied to base and fiber separately. Requires order >= 2.
TangentElement tangent_proj(const TangentElement& e);

/// kappa and proj as smooth maps on flat coordinates of order `order`
/// elements.
SmoothMap kappa_map(int order, int base_dim);
SmoothMap proj_map(int order, int base_dim);

/// D^order f acting on order-`order` elements laid out block-major.
SmoothMap tangent_map(const SmoothMap& f, int order);

/// Applies D^r f to an element of order r over R^(f.in_dim()).
TangentElement push_forward(const SmoothMap& f, const TangentElement& e);

/// Central difference (f(x + h v) - f(x - h v)) / 2h.
std::vector<double> fd_oracle(const SmoothMap& f, std::span<const double> x, std::span<const double> v, double h);

/// Largest absolute coordinate difference. DimensionError on shape mismatch.
double max_abs_diff(const TangentElement& a, const TangentElement& b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);

using Rng = std::mt19937_64;

/// Element with coordinates drawn uniformly from [lo, hi].
TangentElement random_element(int order, int base_dim, Rng& rng, double lo = -1.0, double hi = 1.0);

}  // namespace tinf
