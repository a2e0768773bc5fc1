#include <doctest.h>

#include "oracles.hpp"
#include "tinf/errors.hpp"
#include "tinf/lifts.hpp"

using namespace tinf;

namespace {

TangentElement el(int order, int n, std::vector<double> v) { return TangentElement(order, n, std::move(v)); }

ScalarFunction fn(int level, int n, const std::string& expr) {
  return ScalarFunction(level, n, parse_map((std::size_t{1} << level) * n, {expr}));
}

VectorField field(int level, int n, std::vector<std::string> exprs, std::string name = "f") {
  return VectorField(level, n, parse_map((std::size_t{1} << level) * n, exprs), std::move(name));
}

}  // namespace

TEST_CASE("scalar function and field shapes are validated") {
  CHECK_THROWS_AS(ScalarFunction(1, 1, parse_map(1, {"x0"})), DimensionError);
  CHECK_THROWS_AS(ScalarFunction(0, 1, parse_map(1, {"x0", "x0"})), DimensionError);
  CHECK_THROWS_AS(VectorField(1, 1, parse_map(2, {"x0"})), DimensionError);
  CHECK_THROWS_AS(VectorField(-1, 1, parse_map(2, {"x0", "x1"})), OrderError);
  const VectorField v = field(1, 1, {"x1", "-x0"});
  CHECK_THROWS_AS(v.fiber(el(2, 1, {1, 2, 3, 4})), DimensionError);
}

TEST_CASE("vertical lift of functions") {
  CHECK(vertical_lift_function(fn(0, 1, "x0^2"))(el(1, 1, {3, 2})) == 9);
  CHECK(vertical_lift_function(fn(1, 1, "x0*x1"))(el(2, 1, {3, 2, 5, 7})) == 15);
  oracle::Gen g(31);
  const ScalarFunction c = vertical_lift_function(fn(1, 2, "4.25"));
  for (int k = 0; k < 10; ++k) CHECK(c(g.element(2, 2)) == 4.25);
}

TEST_CASE("complete lift of functions") {
  const ScalarFunction sq = fn(0, 1, "x0^2");
  const double fd0 = oracle::central_diff(oracle::as_fn(sq.map()), {3}, {2})[0];
  CHECK(complete_lift_function(sq)(el(1, 1, {3, 2})) == doctest::Approx(fd0).epsilon(1e-9));
  CHECK(complete_lift_function(sq)(el(1, 1, {3, 2})) == 12);

  const ScalarFunction xy = fn(1, 1, "x0*x1");
  const double fd1 = oracle::central_diff(oracle::as_fn(xy.map()), {3, 5}, {2, 7})[0];
  CHECK(complete_lift_function(xy)(el(2, 1, {3, 2, 5, 7})) == doctest::Approx(fd1).epsilon(1e-9));
  CHECK(complete_lift_function(xy)(el(2, 1, {3, 2, 5, 7})) == 31);

  oracle::Gen g(32);
  const ScalarFunction c = complete_lift_function(fn(1, 2, "-3"));
  for (int k = 0; k < 10; ++k) CHECK(c(g.element(2, 2)) == 0.0);
}

TEST_CASE("vertical lift of a field") {
  const VectorField a = field(1, 1, {"x1", "-x0"});
  const TangentElement xi = el(2, 1, {3, 2, 5, 7});
  const VectorField av = vertical_lift_field(a);
  CHECK(av.level() == 2);
  CHECK(av.fiber(xi).values() == std::vector<double>{0, 5, 0, -3});
  CHECK(proj(av.section(xi)) == xi);
  CHECK(oracle::vertical_lift_definitional(a, xi) == av.fiber(xi));

  const VectorField z = vertical_lift_field(VectorField(1, 2, zero(4, 4)));
  oracle::Gen g(33);
  for (int k = 0; k < 10; ++k) CHECK(max_abs(z.fiber(g.element(2, 2)).flat()) == 0.0);

  // level 0: (0, A(x))
  const VectorField b = field(0, 1, {"x0^2"});
  CHECK(vertical_lift_field(b).fiber(el(1, 1, {3, 4})).values() == std::vector<double>{0, 9});
}

TEST_CASE("complete lift of a field") {
  const VectorField a = field(1, 1, {"x1", "-x0"});
  const TangentElement xi = el(2, 1, {3, 2, 5, 7});
  const VectorField ac = complete_lift_field(a);
  CHECK(ac.fiber(xi).values() == std::vector<double>{5, 7, -3, -2});
  CHECK(proj(ac.section(xi)) == xi);

  // linear field: lift is linear, so f(a + b) = f(a) + f(b)
  oracle::Gen g(34);
  const VectorField lin = field(1, 2, {"2*x0 - x3", "x1 + x2", "-x0", "0.5*x3 + x1"});
  const VectorField lc = complete_lift_field(lin);
  for (int k = 0; k < 20; ++k) {
    const TangentElement p = g.element(2, 2), q = g.element(2, 2);
    std::vector<double> s(p.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = p.values()[i] + q.values()[i];
    const auto fs = lc.fiber(TangentElement(2, 2, s));
    const auto fp = lc.fiber(p), fq = lc.fiber(q);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(fs.values()[i] == doctest::Approx(fp.values()[i] + fq.values()[i]));
  }

  // level 0: (A(x), dA(x) y)
  const VectorField b = field(0, 1, {"x0^2"});
  CHECK(complete_lift_field(b).fiber(el(1, 1, {3, 4})).values() == std::vector<double>{9, 24});
}

TEST_CASE("iterated complete lift") {
  const VectorField x = field(1, 1, {"x1", "-sin(x0)"});
  CHECK(iterated_complete_lift(x, 0).fiber_map().in_dim() == x.fiber_map().in_dim());
  oracle::Gen g(35);
  const VectorField once = iterated_complete_lift(x, 1);
  const VectorField direct = complete_lift_field(x);
  for (int k = 0; k < 10; ++k) {
    const TangentElement xi = g.element(2, 1);
    CHECK(once.fiber(xi) == direct.fiber(xi));
  }
  // nested differences on a linear field, wide step
  const VectorField flat = field(1, 2, {"x2", "x3", "0", "0"});
  const VectorField twice = iterated_complete_lift(flat, 2);
  const oracle::Fn level1 = [&](const std::vector<double>& v) { return flat.fiber_map()(v); };
  const oracle::Fn level2 = [&](const std::vector<double>& v) {
    return oracle::complete_lift_fd(level1, 1, TangentElement(2, 2, v), 0.5);
  };
  for (int k = 0; k < 10; ++k) {
    const TangentElement xi = g.element(3, 2);
    const std::vector<double> expect = oracle::complete_lift_fd(level2, 2, xi, 0.5);
    CHECK(oracle::rel_dev(twice.fiber(xi).values(), expect) <= 1e-12);
  }
  CHECK_THROWS_AS(iterated_complete_lift(x, 6), OrderError);
  CHECK_THROWS_AS(iterated_complete_lift(x, 3, 3), OrderError);
  CHECK_THROWS_AS(complete_lift_field(field(3, 1, std::vector<std::string>(8, "x0")), 3), OrderError);
}

TEST_CASE("functorial and local lifts agree on random fields") {
  oracle::Gen g(36);
  for (int r = 1; r <= 3; ++r) {
    for (int trial = 0; trial < 4; ++trial) {
      const int n = g.integer(1, 2);
      const VectorField a = oracle::random_field(g, r, n);
      const std::size_t d = a.dim();
      const ScalarFunction f(r, n, oracle::random_map(g, d, 1));
      const VectorField ac = complete_lift_field(a), av = vertical_lift_field(a);
      const ScalarFunction fc = complete_lift_function(f), fv = vertical_lift_function(f);
      for (int k = 0; k < 25; ++k) {
        const TangentElement xi = g.element(r + 1, n);
        CHECK(oracle::rel_dev(ac.fiber(xi).values(), local_form::complete_lift_field(a, xi).values()) <= 1e-12);
        CHECK(oracle::rel_dev(av.fiber(xi).values(), local_form::vertical_lift_field(a, xi).values()) <= 1e-12);
        CHECK(oracle::rel_dev({fc(xi)}, {local_form::complete_lift_function(f, xi)}) <= 1e-12);
        CHECK(oracle::rel_dev({fv(xi)}, {local_form::vertical_lift_function(f, xi)}) <= 1e-12);
        // independent check against finite differences
        const oracle::Fn af = oracle::as_fn(a.fiber_map());
        CHECK(oracle::rel_dev(ac.fiber(xi).values(), oracle::complete_lift_fd(af, r, xi)) <= 1e-6);
        CHECK(oracle::vertical_lift_definitional(a, xi) == av.fiber(xi));
      }
    }
  }
}

TEST_CASE("lifted fields are sections") {
  oracle::Gen g(37);
  for (int r = 0; r <= 3; ++r) {
    const VectorField a = oracle::random_field(g, r, 2);
    const VectorField ac = complete_lift_field(a), av = vertical_lift_field(a);
    for (int k = 0; k < 100; ++k) {
      const TangentElement xi = g.element(r + 1, 2);
      CHECK(proj(ac.section(xi)) == xi);
      CHECK(proj(av.section(xi)) == xi);
    }
  }
}

TEST_CASE("complete lifts are related by the tangent projections") {
  // D^2 pi o X^(c_(i+1)) = X^(c_i) o D pi, with X^(c_0) = X on level 1
  oracle::Gen g(38);
  const VectorField x = oracle::random_field(g, 1, 1);
  std::vector<VectorField> lifts = {x};
  for (int i = 0; i < 3; ++i) lifts.push_back(complete_lift_field(lifts.back()));
  for (int i = 0; i < 3; ++i) {
    const int m = 1 + i;  // pi between orders m and m-1
    const SmoothMap d1 = tangent_map(proj_map(m, 1), 1), d2 = tangent_map(proj_map(m, 1), 2);
    for (int k = 0; k < 50; ++k) {
      const TangentElement xi = g.element(m + 1, 1);
      const std::vector<double> lhs = d2(lifts[i + 1].section(xi).flat());
      const std::vector<double> rhs = lifts[i].section(TangentElement(m, 1, d1(xi.flat()))).values();
      CHECK(oracle::rel_dev(lhs, rhs) <= 1e-12);
    }
  }
}

TEST_CASE("complete lifts of functions do not commute with the projection") {
  // f = x^2: f^(c_1)(x, y) = 2 x y, f^(c_2) = 2 (X y + x Y)
  const TangentElement p = el(2, 1, {1, 1, 1, 1});
  const double by_hand_lhs = 2 * 1 * 1;
  const double by_hand_rhs = 2 * (1 * 1 + 1 * 1);
  const ScalarFunction f = fn(0, 1, "x0^2");
  const ScalarFunction c1 = complete_lift_function(f), c2 = complete_lift_function(c1);
  CHECK(c1(proj(p)) == by_hand_lhs);
  CHECK(c2(p) == by_hand_rhs);
  CHECK(std::abs(c1(proj(p)) - c2(p)) >= 0.1);
}

TEST_CASE("vertical lifts ignore the fiber blocks") {
  oracle::Gen g(39);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarFunction f(1, 2, oracle::random_map(g, 4, 1));
    const ScalarFunction fv = vertical_lift_function(f);
    TangentElement xi = g.element(2, 2);
    const double before = fv(xi);
    // perturb y (block 1) and Y (block 3)
    for (std::size_t b : {1u, 3u})
      for (int c = 0; c < 2; ++c) xi(b, c) += g.uniform();
    CHECK(fv(xi) == before);
  }
}
