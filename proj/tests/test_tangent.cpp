#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tinf/errors.hpp"
#include "tinf/tangent.hpp"

using namespace tinf;

namespace {

TangentElement el(int order, int n, std::vector<double> v) { return TangentElement(order, n, std::move(v)); }

TangentElement apply(const SmoothMap& m, const TangentElement& e, int order) {
  return TangentElement(order, e.base_dim(), m(e.flat()));
}

}  // namespace

TEST_CASE("make_element packs blocks in mask order") {
  const std::vector<double> flat = {1, 2};
  const TangentElement a = make_element(0, 2, flat);
  CHECK(a.block_count() == 1);
  CHECK(a(0, 0) == 1);
  CHECK(a(0, 1) == 2);
  const TangentElement b = el(2, 1, {3, 2, 5, 7});
  CHECK(b.block(0)[0] == 3);
  CHECK(b.block(1)[0] == 2);
  CHECK(b.block(2)[0] == 5);
  CHECK(b.block(3)[0] == 7);
  const std::vector<double> three = {1, 2, 3};
  CHECK_THROWS_AS(make_element(1, 1, three), DimensionError);
  CHECK_THROWS_AS(TangentElement(-1, 1), OrderError);
  CHECK_THROWS_AS(TangentElement(25, 1), OrderError);
  CHECK_THROWS_AS(TangentElement(1, 0), DimensionError);
  CHECK_THROWS_AS(b.block(4), DimensionError);
}

TEST_CASE("kappa swaps the middle blocks") {
  CHECK(kappa(el(2, 1, {3, 2, 5, 7})).values() == std::vector<double>{3, 5, 2, 7});
  CHECK(kappa(el(1, 1, {4, 9})).values() == std::vector<double>{4, 9});
  CHECK_THROWS_AS(kappa(el(0, 1, {1})), OrderError);
  // order 3 over R^1: bits 2 and 1 transposed, bit 0 kept
  CHECK(kappa(el(3, 1, {0, 1, 2, 3, 4, 5, 6, 7})).values() == std::vector<double>{0, 1, 4, 5, 2, 3, 6, 7});
}

TEST_CASE("kappa agrees with a blockwise quarter swap") {
  oracle::Gen g(21);
  for (int r = 2; r <= 6; ++r)
    for (int k = 0; k < 20; ++k) {
      const TangentElement e = g.element(r, g.integer(1, 3));
      CHECK(kappa(e) == oracle::quarter_swap(e));
    }
}

TEST_CASE("proj keeps the base half") {
  CHECK(proj(el(2, 1, {3, 2, 5, 7})).values() == std::vector<double>{3, 2});
  CHECK(proj(el(1, 1, {4, 9})).values() == std::vector<double>{4});
  CHECK_THROWS_AS(proj(el(0, 1, {1})), OrderError);
  oracle::Gen g(22);
  const std::vector<double> flat = g.vec(16);
  const TangentElement e = make_element(3, 2, flat);
  CHECK(proj(e).values() == std::vector<double>(flat.begin(), flat.begin() + 8));
}

TEST_CASE("proj_between composes projections") {
  const TangentElement e = el(2, 1, {3, 2, 5, 7});
  CHECK(proj_between(2, 2, e) == e);
  CHECK(proj_between(2, 0, e).values() == std::vector<double>{3});
  oracle::Gen g(23);
  const TangentElement f = g.element(3, 2);
  CHECK(proj_between(3, 1, f) == proj(proj(f)));
  CHECK_THROWS_AS(proj_between(2, 3, e), OrderError);
  CHECK_THROWS_AS(proj_between(3, 1, e), OrderError);
}

TEST_CASE("tangent_proj applies proj to base and fiber") {
  const TangentElement e = el(2, 1, {3, 2, 5, 7});
  CHECK(tangent_proj(e).values() == std::vector<double>{3, 5});
  CHECK_THROWS_AS(tangent_proj(el(1, 1, {1, 2})), OrderError);
}

TEST_CASE("tangent_map examples") {
  const SmoothMap sq = parse_map(1, {"x0^2"});
  const std::vector<double> in = {3, 2};
  const std::vector<double> out = tangent_map(sq, 1)(in);
  const std::vector<double> fd = oracle::central_diff(oracle::as_fn(sq), {3}, {2});
  CHECK(out[0] == 9);
  CHECK(out[1] == doctest::Approx(fd[0]).epsilon(1e-9));
  CHECK(out[1] == 12);

  // sin(x + e y + d X + e d Y) at x=0: (0, cos 0 * 1, cos 0 * 1, -sin 0 + cos 0 * 0)
  const std::vector<double> in2 = {0, 1, 1, 0};
  CHECK(tangent_map(parse_map(1, {"sin(x0)"}), 2)(in2) == std::vector<double>{0, 1, 1, 0});

  oracle::Gen g(24);
  for (int r = 0; r <= 3; ++r) {
    const TangentElement e = g.element(r, 3);
    CHECK(push_forward(identity(3), e) == e);
  }
}

TEST_CASE("fd_oracle examples") {
  const SmoothMap sq = parse_map(1, {"x0^2"});
  const std::vector<double> x = {3}, v = {1};
  CHECK(std::abs(fd_oracle(sq, x, v, 1e-5)[0] - 6.0) <= 1e-9);
  const std::vector<double> x2 = {1, 2}, v2 = {0.5, -1};
  CHECK(fd_oracle(parse_map(2, {"7"}), x2, v2, 1e-5)[0] == 0.0);
  const std::vector<double> lin = fd_oracle(parse_map(2, {"2*x0 - 3*x1"}), x2, v2, 1e-5);
  CHECK(lin[0] == doctest::Approx(2 * 0.5 + 3).epsilon(1e-10));
  CHECK_THROWS_AS(fd_oracle(sq, x, v2, 1e-5), DimensionError);
  CHECK_THROWS_AS(fd_oracle(sq, x, v, 0.0), Error);
}

TEST_CASE("involution, projection and tangent identities hold exactly") {
  oracle::Gen g(25);
  for (int r = 2; r <= 6; ++r) {
    const int n = 1 + r % 2;
    const SmoothMap dk = tangent_map(kappa_map(r, n), 1);
    const SmoothMap dp = tangent_map(proj_map(r, n), 1);
    const SmoothMap ddp = tangent_map(proj_map(r, n), 2);
    for (int k = 0; k < 100; ++k) {
      const TangentElement a = g.element(r, n);
      CHECK(kappa(kappa(a)) == a);
      const TangentElement b = g.element(r + 1, n);
      CHECK(proj(apply(dk, b, r + 1)) == kappa(proj(b)));
      CHECK(apply(dp, b, r) == proj(kappa(b)));
      const TangentElement c = g.element(r + 2, n);
      CHECK(apply(ddp, kappa(c), r + 1) == kappa(apply(ddp, c, r + 1)));
      CHECK(apply(dp, proj(c), r) == proj(apply(ddp, c, r + 1)));
    }
  }
}

TEST_CASE("tangent of proj equals tangent_proj") {
  oracle::Gen g(26);
  for (int r = 1; r <= 5; ++r) {
    const SmoothMap dp = tangent_map(proj_map(r, 2), 1);
    for (int k = 0; k < 20; ++k) {
      const TangentElement e = g.element(r + 1, 2);
      CHECK(apply(dp, e, r) == tangent_proj(e));
    }
  }
}

TEST_CASE("tangent_map matches central differences on random programs") {
  oracle::Gen g(27);
  for (int k = 0; k < 100; ++k) {
    const std::size_t in = static_cast<std::size_t>(g.integer(1, 4)), out = static_cast<std::size_t>(g.integer(1, 3));
    const SmoothMap f = oracle::random_map(g, in, out);
    const std::vector<double> x = g.vec(in), v = g.vec(in);
    const std::vector<double> t = tangent(f)(oracle::cat(x, v));
    const std::vector<double> fd = oracle::central_diff(oracle::as_fn(f), x, v);
    for (std::size_t i = 0; i < out; ++i) {
      CHECK(std::abs(t[out + i] - fd[i]) <= std::max(1e-6, 1e-6 * std::abs(fd[i])));
    }
  }
}

TEST_CASE("second tangent matches differences of the first") {
  oracle::Gen g(28);
  for (int k = 0; k < 50; ++k) {
    const SmoothMap f = oracle::random_map(g, 2, 1);
    const std::vector<double> e = g.vec(8);
    const std::vector<double> t2 = tangent_map(f, 2)(e);
    // fiber half of D^2 f is the derivative of Df along the fiber half
    const std::vector<double> base(e.begin(), e.begin() + 4), dir(e.begin() + 4, e.end());
    const std::vector<double> fd = oracle::central_diff(oracle::as_fn(tangent(f)), base, dir);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(t2[2 + i] - fd[i]) <= 1e-6 * std::max(1.0, std::abs(fd[i])));
  }
}

TEST_CASE("tangent is functorial") {
  oracle::Gen g(29);
  for (int k = 0; k < 50; ++k) {
    const SmoothMap f = oracle::random_map(g, 2, 3), h = oracle::random_map(g, 3, 2);
    const std::vector<double> e = g.vec(8);
    const std::vector<double> a = tangent_map(compose(h, f), 2)(e);
    const std::vector<double> b = compose(tangent_map(h, 2), tangent_map(f, 2))(e);
    CHECK(oracle::rel_dev(a, b) <= 1e-14);
  }
}

TEST_CASE("random_element is reproducible") {
  Rng a(9), b(9);
  CHECK(random_element(3, 2, a) == random_element(3, 2, b));
}

TEST_CASE("max_abs_diff checks shapes") {
  CHECK_THROWS_AS(max_abs_diff(el(1, 1, {1, 2}), el(0, 2, {1, 2})), DimensionError);
  CHECK(max_abs_diff(el(1, 1, {1, 2}), el(1, 1, {1, 5})) == 3);
}
