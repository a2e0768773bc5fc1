#include "tinf/tangent.hpp"

#include <algorithm>
#include <cmath>

#include "tinf/errors.hpp"

namespace tinf {

namespace {

constexpr int kHardOrderLimit = 24;

void check_shape(int order, int base_dim) {
  if (order < 0 || order > kHardOrderLimit) throw OrderError("tangent order " + std::to_string(order) + " out of range");
  if (base_dim < 1) throw DimensionError("base dimension must be positive");
}

// Block index permutation transposing bits a and b.
std::size_t swap_bits(std::size_t s, int a, int b) {
  const std::size_t ba = (s >> a) & 1u, bb = (s >> b) & 1u;
  if (ba == bb) return s;
  return s ^ ((std::size_t{1} << a) | (std::size_t{1} << b));
}

std::vector<int> kappa_indices(int order, int n) {
  const std::size_t blocks = std::size_t{1} << order;
  std::vector<int> idx(blocks * static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < blocks; ++s) {
    const std::size_t src = order >= 2 ? swap_bits(s, order - 1, order - 2) : s;
    for (int c = 0; c < n; ++c) idx[s * n + c] = static_cast<int>(src * n + c);
  }
  return idx;
}

}  // namespace

TangentElement::TangentElement(int order, int base_dim) : order_(order), base_dim_(base_dim) {
  check_shape(order, base_dim);
  data_.assign((std::size_t{1} << order) * static_cast<std::size_t>(base_dim), 0.0);
}

TangentElement::TangentElement(int order, int base_dim, std::vector<double> flat)
    : order_(order), base_dim_(base_dim), data_(std::move(flat)) {
  check_shape(order, base_dim);
  const std::size_t expected = (std::size_t{1} << order) * static_cast<std::size_t>(base_dim);
  if (data_.size() != expected) {
    throw DimensionError("order " + std::to_string(order) + " element over R^" + std::to_string(base_dim) + " needs " +
                         std::to_string(expected) + " coordinates, got " + std::to_string(data_.size()));
  }
}

std::span<const double> TangentElement::block(std::size_t mask) const {
  if (mask >= block_count()) throw DimensionError("block mask out of range");
  return std::span<const double>(data_).subspan(mask * base_dim_, base_dim_);
}

std::span<double> TangentElement::block(std::size_t mask) {
  if (mask >= block_count()) throw DimensionError("block mask out of range");
  return std::span<double>(data_).subspan(mask * base_dim_, base_dim_);
}

TangentElement TangentElement::base() const {
  if (order_ < 1) throw OrderError("order 0 element has no base/fiber split");
  const std::size_t half = data_.size() / 2;
  return TangentElement(order_ - 1, base_dim_, std::vector<double>(data_.begin(), data_.begin() + half));
}

TangentElement TangentElement::fiber() const {
  if (order_ < 1) throw OrderError("order 0 element has no base/fiber split");
  const std::size_t half = data_.size() / 2;
  return TangentElement(order_ - 1, base_dim_, std::vector<double>(data_.begin() + half, data_.end()));
}

TangentElement make_element(int order, int base_dim, std::span<const double> flat) {
  return TangentElement(order, base_dim, std::vector<double>(flat.begin(), flat.end()));
}

TangentElement join(const TangentElement& base, const TangentElement& fiber) {
  if (base.order() != fiber.order() || base.base_dim() != fiber.base_dim()) {
    throw DimensionError("join: base and fiber shapes differ");
  }
  std::vector<double> flat(base.values());
  flat.insert(flat.end(), fiber.values().begin(), fiber.values().end());
  return TangentElement(base.order() + 1, base.base_dim(), std::move(flat));
}

TangentElement kappa(const TangentElement& e) {
  if (e.order() < 1) throw OrderError("kappa needs order >= 1");
  if (e.order() == 1) return e;
  const std::vector<int> idx = kappa_indices(e.order(), e.base_dim());
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = e.values()[static_cast<std::size_t>(idx[i])];
  return TangentElement(e.order(), e.base_dim(), std::move(out));
}

TangentElement proj(const TangentElement& e) {
  if (e.order() < 1) throw OrderError("proj needs order >= 1");
  return e.base();
}

TangentElement proj_between(int j, int i, const TangentElement& e) {
  if (e.order() != j) throw OrderError("proj_between: element order " + std::to_string(e.order()) + " != " + std::to_string(j));
  if (i > j || i < 0) throw OrderError("proj_between: need j >= i >= 0");
  TangentElement r = e;
  for (int k = j; k > i; --k) r = proj(r);
  return r;
}

TangentElement tangent_proj(const TangentElement& e) {
  if (e.order() < 2) throw OrderError("tangent projection needs order >= 2");
  return join(proj(e.base()), proj(e.fiber()));
}

SmoothMap kappa_map(int order, int base_dim) {
  check_shape(order, base_dim);
  if (order < 1) throw OrderError("kappa needs order >= 1");
  return select((std::size_t{1} << order) * base_dim, kappa_indices(order, base_dim));
}

SmoothMap proj_map(int order, int base_dim) {
  check_shape(order, base_dim);
  if (order < 1) throw OrderError("proj needs order >= 1");
  const std::size_t in = (std::size_t{1} << order) * base_dim;
  std::vector<int> idx(in / 2);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return select(in, std::move(idx));
}

SmoothMap tangent_map(const SmoothMap& f, int order) {
  if (order < 0) throw OrderError("tangent order must be non-negative");
  SmoothMap r = f;
  for (int k = 0; k < order; ++k) r = tangent(r);
  return r;
}

TangentElement push_forward(const SmoothMap& f, const TangentElement& e) {
  if (static_cast<std::size_t>(e.base_dim()) != f.in_dim()) {
    throw DimensionError("push_forward: map expects base dimension " + std::to_string(f.in_dim()));
  }
  const SmoothMap t = tangent_map(f, e.order());
  return TangentElement(e.order(), static_cast<int>(f.out_dim()), t(e.flat()));
}

std::vector<double> fd_oracle(const SmoothMap& f, std::span<const double> x, std::span<const double> v, double h) {
  if (x.size() != v.size()) throw DimensionError("fd_oracle: point and direction sizes differ");
  if (!(h > 0.0)) throw Error("fd_oracle: step must be positive");
  std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] += h * v[i];
    xm[i] -= h * v[i];
  }
  const std::vector<double> fp = f(xp), fm = f(xm);
  std::vector<double> d(fp.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (fp[i] - fm[i]) / (2.0 * h);
  return d;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("max_abs_diff: sizes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const TangentElement& a, const TangentElement& b) {
  if (a.order() != b.order() || a.base_dim() != b.base_dim()) throw DimensionError("max_abs_diff: shapes differ");
  return max_abs_diff(a.flat(), b.flat());
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

TangentElement random_element(int order, int base_dim, Rng& rng, double lo, double hi) {
  TangentElement e(order, base_dim);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : e.flat()) v = dist(rng);
  return e;
}

}  // namespace tinf
