#include <doctest.h>

#include "oracles.hpp"
#include "tinf/errors.hpp"
#include "tinf/tower.hpp"

using namespace tinf;

namespace {

TangentElement point(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  return TangentElement(0, n, std::move(v));
}

FlowSpec window(double t1, double dt) {
  FlowSpec s;
  s.t1 = t1;
  s.dt = dt;
  return s;
}

// D^2 pi o X^(c_(i+1)) against X^(c_i) o D pi, written without the tower code.
double projective_gap(const VectorField& upper, const VectorField& lower, const TangentElement& xi) {
  const int m = lower.level();
  const int n = lower.base_dim();
  const std::vector<double> lhs = tangent_map(proj_map(m, n), 2)(upper.section(xi).flat());
  const TangentElement down(m, n, tangent_map(proj_map(m, n), 1)(xi.flat()));
  return oracle::rel_dev(lhs, lower.section(down).values());
}

}  // namespace

TEST_CASE("tower construction") {
  const LiftTower only = build_tower(catalog::sphere(), 0);
  CHECK(only.depth() == 0);
  CHECK(only.kind() == TowerKind::spray);
  CHECK(only.spray(0).level() == 1);

  const LiftTower flat = build_tower(catalog::flat(2), 3);
  CHECK(flat.depth() == 3);
  oracle::Gen g(61);
  for (int i = 0; i <= 3; ++i) {
    CHECK(flat.spray(i).level() == 1 + i);
    CHECK(flat.field(i).dim() == (std::size_t{1} << (i + 1)) * 2);
    for (int k = 0; k < 10; ++k) CHECK(max_abs(flat.spray(i).coefficient()(g.vec(flat.spray(i).dim()))) == 0.0);
  }

  const LiftTower sphere = build_tower(catalog::sphere(), 2);
  for (int i = 0; i <= 2; ++i) {
    CHECK(is_semispray(sphere.field(i), 100).holds());
    CHECK(homogeneity_check(sphere.spray(i), {2, -1, 0.5, 0}, 100).holds());
  }
  for (const CheckReport& r : sphere.structural()) CHECK(r.ok());
  CHECK_THROWS_AS(flat.with_level(1, VectorField(1, 2, zero(4, 4))), DimensionError);
}

TEST_CASE("tower limits") {
  CHECK_THROWS_AS(build_tower(catalog::sphere(), -1), OrderError);
  CHECK_THROWS_AS(build_tower(catalog::sphere(), 6), OrderError);
  TowerOptions o;
  o.max_order = 10;
  CHECK(default_coordinate_budget(2) == 256);
  CHECK_NOTHROW(build_tower(catalog::flat(2), 6, o));  // top order 7: 256 coordinates
  CHECK_THROWS_AS(build_tower(catalog::flat(2), 7, o), OrderError);
  o.coordinate_budget = 32;
  CHECK_NOTHROW(build_tower(catalog::flat(2), 3, o));
  CHECK_THROWS_AS(build_tower(catalog::flat(2), 4, o), OrderError);
  CHECK_THROWS_AS(build_tower(VectorField(0, 1, zero(1, 1)), 1), OrderError);
  const LiftTower fields = build_tower(VectorField(1, 1, parse_map(2, {"x1", "-x0"})), 1);
  CHECK(fields.kind() == TowerKind::field);
  CHECK_THROWS_AS(fields.spray(0), StructuralError);
}

TEST_CASE("threaded states") {
  const TangentElement base(1, 2, {1, 2, 3, 4});
  const TowerState zero_seeded = lift_state(base, 3);
  CHECK(zero_seeded.depth() == 3);
  CHECK(zero_seeded.threading_deviation() == 0.0);
  for (int i = 0; i <= 3; ++i) {
    const TangentElement& s = zero_seeded.states[static_cast<std::size_t>(i)];
    CHECK(s.order() == 1 + i);
    CHECK(proj_between(i + 1, 1, s) == base);
    for (std::size_t v = base.size(); v < s.size(); ++v) CHECK(s.values()[v] == 0.0);
  }

  oracle::Gen g(62);
  TowerState seed;
  for (int i = 0; i <= 3; ++i) seed.states.push_back(g.element(1 + i, 2));
  const TowerState seeded = lift_state(base, 3, seed);
  CHECK(seeded.threading_deviation() == 0.0);
  CHECK(seeded.states[3].values().back() == seed.states[3].values().back());
  for (int i = 0; i <= 3; ++i) CHECK(proj_between(i + 1, 1, seeded.states[static_cast<std::size_t>(i)]) == base);

  const TowerState tangent = lift_state(TangentElement(2, 1, {1, 2, 3, 4}), 2, std::nullopt, Threading::tangent_projection);
  CHECK(tangent.threading_deviation() == 0.0);
  for (int i = 0; i < 2; ++i) CHECK(tangent_proj(tangent.states[i + 1]) == tangent.states[static_cast<std::size_t>(i)]);

  Rng rng(5);
  const TowerState r = random_state(2, 2, 3, Threading::tangent_projection, rng);
  CHECK(r.threading_deviation() == 0.0);
  CHECK(r.states.back().order() == 5);
}

TEST_CASE("projective relation of field towers") {
  oracle::Gen g(63);
  const LiftTower sphere = build_tower(catalog::sphere(), 3);
  const auto reports = check_projective_field(sphere, 100);
  CHECK(reports.size() == 3 + 3);  // adjacent pairs then composed (2,0), (3,1), (3,0)
  for (const CheckReport& r : reports) {
    CHECK(r.max_deviation <= 1e-12);
    CHECK(r.ok());
  }
  // the oracle on the same tower
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 20; ++k) {
      const TangentElement xi = g.element(sphere.field(i + 1).level(), 2);
      CHECK(projective_gap(sphere.field(i + 1), sphere.field(i), xi) <= 1e-12);
    }
  }

  const LiftTower random_field_tower = build_tower(oracle::random_field(g, 1, 1), 2);
  for (const CheckReport& r : check_projective_field(random_field_tower, 100)) CHECK(r.max_deviation <= 1e-12);

  const auto vacuous = check_projective_field(build_tower(catalog::sphere(), 0), 10);
  REQUIRE(vacuous.size() == 1);
  CHECK(vacuous[0].ok());

  // a foreign level breaks both the library check and the oracle
  const VectorField foreign(3, 2, parse_map(16, std::vector<std::string>(16, "1 + x0 * x5")));
  const LiftTower broken = sphere.with_level(2, foreign);
  double worst = 0.0;
  for (const CheckReport& r : check_projective_field(broken, 100)) worst = std::max(worst, r.max_deviation);
  CHECK(worst >= 0.1);
  double oracle_worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    oracle_worst = std::max(oracle_worst, projective_gap(broken.field(2), broken.field(1), g.element(3, 2)));
  }
  CHECK(oracle_worst >= 0.1);
}

TEST_CASE("complete lifts of functions are not projective") {
  const ScalarFunction f(0, 1, parse_map(1, {"x0^2"}));
  const CheckReport rep = check_projective_function(f, {TangentElement(2, 1, {1, 1, 1, 1})});
  CHECK(rep.max_deviation == 2.0);
  CHECK_FALSE(rep.holds());
  CHECK(rep.ok());
  CHECK_THROWS_AS(check_projective_function(f, {TangentElement(1, 1, {1, 1})}), OrderError);
}

TEST_CASE("tower geodesics") {
  const FlowSpec spec = window(1, 1e-3);
  const LiftTower flat = build_tower(catalog::flat(1), 2);
  const TowerState pos = lift_state(point({0.5}), 2), vel = lift_state(point({1.0}), 2);
  const TowerRun run = tower_geodesic(flat, pos, vel, spec);
  REQUIRE(run.trajectories.size() == 3);
  for (const CheckReport& r : run.consistency) CHECK(r.max_deviation == 0.0);
  for (const Trajectory& t : run.trajectories) {
    for (std::size_t k = 0; k < t.times.size(); k += 100) {
      CHECK(std::abs(t.states[k].values()[0] - (0.5 + t.times[k])) <= 1e-12);
    }
  }

  oracle::Gen g(64);
  const LiftTower sphere = build_tower(catalog::sphere(), 2);
  TowerState pseed, vseed;
  for (int i = 0; i <= 2; ++i) {
    pseed.states.push_back(g.element(i, 2, -0.5, 0.5));
    vseed.states.push_back(g.element(i, 2, -0.5, 0.5));
  }
  const TowerState sp = lift_state(point({0.3, -0.2}), 2, pseed), sv = lift_state(point({0.4, 0.6}), 2, vseed);
  const TowerRun srun = tower_geodesic(sphere, sp, sv, spec);
  REQUIRE(srun.consistency.size() == 2);
  for (const CheckReport& r : srun.consistency) CHECK(r.max_deviation <= 1e-12);
  // level 0 is the plain geodesic
  const Trajectory plain = integrate_geodesic(catalog::sphere(), point({0.3, -0.2}), point({0.4, 0.6}), spec);
  CHECK(plain.final_state() == srun.trajectories[0].final_state());
  // independent projection of the top trajectory
  const Trajectory& top = srun.trajectories[2];
  const Trajectory& mid = srun.trajectories[1];
  for (std::size_t k = 0; k < top.states.size(); k += 97) {
    CHECK(max_abs_diff(tangent_proj(top.states[k]), mid.states[k]) <= 1e-12);
  }

  const LiftTower single = build_tower(catalog::sphere(), 0);
  const TowerRun one = tower_geodesic(single, lift_state(point({0.3, -0.2}), 0), lift_state(point({0.4, 0.6}), 0), spec);
  CHECK(one.trajectories.size() == 1);
  CHECK(one.consistency.empty());
  CHECK(one.trajectories[0].final_state() == plain.final_state());

  TowerState unthreaded = sp;
  unthreaded.states[1].flat()[0] += 1.0;
  CHECK_THROWS_AS(tower_geodesic(sphere, unthreaded, sv, spec), DimensionError);
}

TEST_CASE("tower flows") {
  const FlowSpec spec = window(1, 1e-3);
  const LiftTower zero_tower = build_tower(VectorField(1, 1, zero(2, 2), "zero"), 2);
  const TowerState init = lift_state(TangentElement(1, 1, {0.5, -0.25}), 2, std::nullopt, Threading::tangent_projection);
  const TowerRun z = tower_flow(zero_tower, init, spec);
  for (int i = 0; i <= 2; ++i)
    for (const auto& s : z.trajectories[static_cast<std::size_t>(i)].states) CHECK(s == init.states[static_cast<std::size_t>(i)]);

  // x' = 0.5 x, y' = -y on level 1
  const LiftTower lin = build_tower(VectorField(1, 1, parse_map(2, {"0.5 * x0", "-x1"}), "linear"), 2);
  oracle::Gen g(65);
  Rng rng(11);
  const TowerState st = random_state(1, 1, 2, Threading::tangent_projection, rng);
  const TowerRun run = tower_flow(lin, st, spec);
  const auto& f0 = run.trajectories[0].final_state().values();
  CHECK(std::abs(f0[0] - st.states[0].values()[0] * std::exp(0.5)) <= 1e-8);
  CHECK(std::abs(f0[1] - st.states[0].values()[1] * std::exp(-1.0)) <= 1e-8);
  for (const CheckReport& r : run.consistency) CHECK(r.max_deviation <= 1e-12);

  CHECK_THROWS_AS(tower_flow(lin, lift_state(TangentElement(1, 1, {1, 2}), 2), spec), DimensionError);
  CHECK_THROWS_AS(tower_flow(lin, lift_state(TangentElement(1, 1, {1, 2}), 1, std::nullopt, Threading::tangent_projection), spec),
                  DimensionError);
}

TEST_CASE("tower report") {
  const auto j = to_json(build_tower(catalog::sphere(), 2));
  CHECK(j["kind"] == "spray");
  CHECK(j["depth"] == 2);
  CHECK(j["levels"].size() == 3);
  CHECK(j["levels"][2]["coordinates"] == 16);
  CHECK(j["structural"].is_array());
  for (const auto& r : j["structural"]) CHECK(r["passed"] == true);
  const CheckReport s = summarize("all", {CheckReport{"a", 1e-13, 1e-12, 3}, CheckReport{"b", 5e-13, 1e-12, 7}}, 1e-12);
  CHECK(s.max_deviation == 5e-13);
  CHECK(s.samples == 7);
  CHECK(s.ok());
}
