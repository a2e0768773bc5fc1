#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tinf/loop_space.hpp"
#include "tinf/tower.hpp"

namespace tinf::cli {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double rel(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, rel(a[i], b[i]));
  return m;
}

TangentElement random_scaled(int order, int n, Rng& rng, double half_width) {
  return random_element(order, n, rng, -half_width, half_width);
}

// Involution and projection identities on orders 2..max_r, exact index algebra.
std::vector<CheckReport> structural_identities(int n, int max_r, int samples, std::uint64_t seed) {
  const double tol = 1e-14;
  std::vector<CheckReport> reps = {
      {"kappa_involution", 0.0, tol, 0},         {"proj_after_tangent_kappa", 0.0, tol, 0},
      {"tangent_proj_is_proj_kappa", 0.0, tol, 0}, {"second_tangent_proj_kappa", 0.0, tol, 0},
      {"tangent_proj_after_proj", 0.0, tol, 0},
  };
  Rng rng(seed);
  for (int r = 2; r <= max_r; ++r) {
    const SmoothMap dk = tangent_map(kappa_map(r, n), 1);
    const SmoothMap dp = tangent_map(proj_map(r, n), 1);
    const SmoothMap ddp = tangent_map(proj_map(r, n), 2);
    auto as = [n](const SmoothMap& m, const TangentElement& e, int order) {
      return TangentElement(order, n, m(e.flat()));
    };
    for (int k = 0; k < samples; ++k) {
      const TangentElement a = random_element(r, n, rng);
      reps[0].record(max_abs_diff(kappa(kappa(a)), a));
      const TangentElement b = random_element(r + 1, n, rng);
      reps[1].record(max_abs_diff(proj(as(dk, b, r + 1)), kappa(proj(b))));
      reps[2].record(max_abs_diff(as(dp, b, r), proj(kappa(b))));
      const TangentElement c = random_element(r + 2, n, rng);
      reps[3].record(max_abs_diff(as(ddp, kappa(c), r + 1), kappa(as(ddp, c, r + 1))));
      reps[4].record(max_abs_diff(as(dp, proj(c), r), proj(as(ddp, c, r + 1))));
    }
  }
  for (auto& rep : reps) rep.samples = samples * (max_r - 1);
  return reps;
}

std::vector<SmoothMap> fd_catalog() {
  return {
      parse_map(1, {"x0^2"}),
      parse_map(1, {"sin(x0)"}),
      parse_map(2, {"sin(x0) * exp(x1)", "log(2 + x0 * x1)"}),
      parse_map(2, {"sqrt(3 + x0) / (1 + x1^2)", "x0^3 - 2 * x0 * x1"}),
      parse_map(3, {"cos(x0 * x1) + exp(-x2)", "(1 + x0^2)^1.5", "x1 / (2 + sin(x2))"}),
  };
}

CheckReport dual_vs_fd(const std::vector<SmoothMap>& maps, int samples, double tol, std::uint64_t seed) {
  CheckReport rep{"dual_vs_finite_difference", 0.0, tol, samples * static_cast<int>(maps.size())};
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const SmoothMap& f : maps) {
    const SmoothMap tf = tangent(f);
    for (int k = 0; k < samples; ++k) {
      std::vector<double> x(f.in_dim()), v(f.in_dim());
      for (auto& e : x) e = u(rng);
      for (auto& e : v) e = u(rng);
      std::vector<double> xv = x;
      xv.insert(xv.end(), v.begin(), v.end());
      const std::vector<double> dual = tf(xv);
      const std::vector<double> fd = fd_oracle(f, x, v, 1e-5);
      rep.record(rel(std::span<const double>(dual).subspan(f.out_dim()), fd));
    }
  }
  return rep;
}

std::vector<CheckReport> local_forms(const VectorField& base, int levels, const RunConfig& cfg) {
  std::vector<CheckReport> out;
  VectorField a = base;
  Rng rng(cfg.seed + 11);
  for (int i = 0; i < levels; ++i) {
    if (i > 0) a = complete_lift_field(a, cfg.max_order);
    const int r = a.level();
    if (r + 1 > cfg.max_order) break;
    const std::string tag = "[" + std::to_string(r) + "]";
    const ScalarFunction f(r, a.base_dim(), compose(select(a.dim(), {static_cast<int>(a.dim()) - 1}), a.fiber_map()));
    const ScalarFunction fv = vertical_lift_function(f);
    const ScalarFunction fc = complete_lift_function(f);
    const VectorField av = vertical_lift_field(a, cfg.max_order);
    const VectorField ac = complete_lift_field(a, cfg.max_order);
    CheckReport rv{"local_vertical_function" + tag, 0.0, cfg.tol.local, cfg.samples};
    CheckReport rc{"local_complete_function" + tag, 0.0, cfg.tol.local, cfg.samples};
    CheckReport rav{"local_vertical_field" + tag, 0.0, cfg.tol.local, cfg.samples};
    CheckReport rac{"local_complete_field" + tag, 0.0, cfg.tol.local, cfg.samples};
    for (int k = 0; k < cfg.samples; ++k) {
      const TangentElement xi = random_element(r + 1, a.base_dim(), rng);
      rv.record(rel(fv(xi), local_form::vertical_lift_function(f, xi)));
      rc.record(rel(fc(xi), local_form::complete_lift_function(f, xi)));
      rav.record(rel(av.fiber(xi).flat(), local_form::vertical_lift_field(a, xi).flat()));
      rac.record(rel(ac.fiber(xi).flat(), local_form::complete_lift_field(a, xi).flat()));
    }
    out.insert(out.end(), {rv, rc, rav, rac});
  }
  return out;
}

std::vector<CheckReport> spray_checks(const Semispray& s, const RunConfig& cfg) {
  std::vector<CheckReport> out;
  Semispray cur = s;
  Rng rng(cfg.seed + 23);
  for (int i = 1; i <= 3 && s.level() + i <= cfg.max_order; ++i) {
    const VectorField below = semispray_to_field(cur);
    cur = complete_lift_spray(cur, cfg.max_order);
    const std::string tag = "[" + std::to_string(i) + "]";
    const VectorField lifted = semispray_to_field(cur);
    CheckReport sem = is_semispray(lifted, cfg.samples, cfg.tol.identity, cfg.seed + i);
    sem.name += tag;
    out.push_back(sem);
    if (cur.flags().claimed_homogeneous) {
      CheckReport h = homogeneity_check(cur, cur.flags().verified_lambdas, cfg.samples, cfg.tol.homogeneity, cfg.seed + i);
      h.name += tag;
      out.push_back(h);
    }
    const VectorField functorial = complete_lift_field(below, cfg.max_order);
    CheckReport cons{"spray_lift_consistency" + tag, 0.0, cfg.tol.identity, cfg.samples};
    for (int k = 0; k < cfg.samples; ++k) {
      const TangentElement xi = random_element(lifted.level(), lifted.base_dim(), rng);
      cons.record(rel(lifted.fiber(xi).flat(), functorial.fiber(xi).flat()));
    }
    out.push_back(cons);
  }
  return out;
}

CheckReport flow_conjugation(const LiftTower& tower, const RunConfig& cfg) {
  const int per_level = std::min(cfg.samples, 3);
  CheckReport rep{"flow_conjugation", 0.0, cfg.tol.conjugation, 0};
  Rng rng(cfg.seed + 31);
  for (int i = 0; i <= std::min(tower.depth(), 2); ++i) {
    const VectorField& x = tower.field(i);
    if (x.level() + 1 > cfg.max_order) break;
    const VectorField xc = complete_lift_field(x, cfg.max_order);
    for (int k = 0; k < per_level; ++k) {
      const TangentElement xi = random_scaled(x.level() + 1, x.base_dim(), rng, 0.5);
      const TangentElement a = flow_map_tangent(x, xi, cfg.flow);
      const TangentElement b = integrate_field(xc, xi, cfg.flow).final_state();
      rep.record(rel(a.flat(), b.flat()));
      ++rep.samples;
    }
  }
  return rep;
}

CheckReport tower_threading(const LiftTower& tower, const RunConfig& cfg) {
  Rng rng(cfg.seed + 37);
  TowerRun run;
  if (tower.kind() == TowerKind::spray) {
    const int pos_order = tower.base_level() - 1;
    TowerState p = random_state(pos_order, tower.base_dim(), tower.depth(), Threading::projection, rng);
    TowerState v = random_state(pos_order, tower.base_dim(), tower.depth(), Threading::projection, rng);
    for (auto* st : {&p, &v})
      for (auto& e : st->states)
        for (double& c : e.flat()) c *= 0.5;
    run = tower_geodesic(tower, p, v, cfg.flow, cfg.tol.identity);
  } else {
    TowerState st = random_state(tower.base_level(), tower.base_dim(), tower.depth(), Threading::tangent_projection, rng);
    for (auto& e : st.states)
      for (double& c : e.flat()) c *= 0.5;
    run = tower_flow(tower, st, cfg.flow, cfg.tol.identity);
  }
  if (run.consistency.empty()) return CheckReport{"tower_threading", 0.0, cfg.tol.identity, 0};
  return summarize("tower_threading", run.consistency, cfg.tol.identity);
}

LoopPoint random_loop(std::size_t n_samples, int order, int n, Rng& rng, double half_width) {
  std::vector<TangentElement> s;
  for (std::size_t j = 0; j < n_samples; ++j) s.push_back(random_scaled(order, n, rng, half_width));
  return LoopPoint(std::move(s));
}

std::vector<CheckReport> loop_checks(const Semispray& s, const RunConfig& cfg) {
  std::vector<CheckReport> out;
  Rng rng(cfg.seed + 41);
  for (std::size_t n_samples : cfg.loop_check_sizes) {
    const LoopPoint c = random_loop(n_samples, s.level() + 1, s.base_dim(), rng, 1.0);
    CheckReport rep = loop_lift_commutes(s, c, cfg.tol.identity);
    rep.name += "[N=" + std::to_string(n_samples) + "]";
    out.push_back(rep);
  }
  const LoopPoint c0 = random_loop(cfg.loop_samples, s.level() - 1, s.base_dim(), rng, 0.5);
  const LoopPoint v0 = random_loop(cfg.loop_samples, s.level() - 1, s.base_dim(), rng, 0.5);
  const LoopTrajectory lt = loop_geodesic(s, c0, v0, cfg.flow);
  CheckReport rep{"loop_geodesic_pointwise", 0.0, 0.0, static_cast<int>(cfg.loop_samples)};
  for (std::size_t j = 0; j < c0.size(); ++j) {
    const Trajectory single = integrate_geodesic(s, c0.samples()[j], v0.samples()[j], cfg.flow);
    for (std::size_t k = 0; k < single.states.size(); ++k) {
      rep.record(max_abs_diff(single.states[k], lt.states[k].samples()[j]));
    }
  }
  out.push_back(rep);
  return out;
}

}  // namespace

std::vector<double> great_circle(double t, double tilt) {
  const double d = 1.0 - std::sin(t) * std::sin(tilt);
  return {std::cos(t) / d, std::sin(t) * std::cos(tilt) / d};
}

double rk4_error_ratio(double dt, double t1) {
  const double tilt = std::numbers::pi / 6;
  const Semispray s = catalog::sphere();
  const TangentElement x0(0, 2, {1.0, 0.0});
  const TangentElement v0(0, 2, {std::sin(tilt), std::cos(tilt)});
  const std::vector<double> exact = great_circle(t1, tilt);
  auto err = [&](double h) {
    const Trajectory t = integrate_geodesic(s, x0, v0, FlowSpec{0.0, t1, h});
    return std::hypot(t.final_state()(0, 0) - exact[0], t.final_state()(0, 1) - exact[1]);
  };
  return err(dt) / err(dt / 2);
}

std::vector<CheckReport> closed_form_suite() {
  std::vector<CheckReport> out;
  {
    CheckReport rep{"geodesic_flat_line", 0.0, 1e-12, 1};
    const Trajectory t = integrate_geodesic(catalog::flat(1), TangentElement(0, 1, {0.0}), TangentElement(0, 1, {1.0}),
                                            FlowSpec{0.0, 1.0, 1e-3});
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      rep.record(std::abs(t.states[k](0, 0) - t.times[k]));
      rep.record(std::abs(t.states[k](1, 0) - 1.0));
    }
    out.push_back(rep);
  }
  {
    CheckReport rep{"geodesic_half_y_squared_log2", 0.0, 1e-8, 1};
    const Trajectory t = integrate_geodesic(catalog::quadratic(1, {1.0}), TangentElement(0, 1, {0.0}),
                                            TangentElement(0, 1, {1.0}), FlowSpec{0.0, 1.0, 1e-3});
    rep.record(std::abs(t.final_state()(0, 0) - std::log(2.0)));
    rep.record(std::abs(t.final_state()(1, 0) - 0.5));
    out.push_back(rep);
  }
  const double tilt = std::numbers::pi / 6;
  const TangentElement x0(0, 2, {1.0, 0.0});
  const TangentElement v0(0, 2, {std::sin(tilt), std::cos(tilt)});
  {
    const Trajectory t = integrate_geodesic(catalog::sphere(), x0, v0, FlowSpec{0.0, 2 * std::numbers::pi, 1e-4});
    CheckReport speed{"geodesic_sphere_speed", 0.0, 1e-6, static_cast<int>(t.states.size())};
    CheckReport circle{"geodesic_sphere_great_circle", 0.0, 1e-8, static_cast<int>(t.states.size())};
    const double g0 = sphere_speed(x0.flat(), v0.flat());
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      const auto& st = t.states[k];
      speed.record(std::abs(sphere_speed(st.block(0), st.block(1)) - g0) / g0);
      const std::vector<double> exact = great_circle(t.times[k], tilt);
      circle.record(std::hypot(st(0, 0) - exact[0], st(0, 1) - exact[1]));
    }
    out.push_back(speed);
    out.push_back(circle);
  }
  {
    const double ratio = rk4_error_ratio(0.02, 1.0);
    CheckReport rep{"rk4_order_four", std::isfinite(ratio) ? std::abs(ratio - 16.0) : HUGE_VAL, 4.0, 2};
    out.push_back(rep);
  }
  return out;
}

VerifyResult verify_suite(const RunConfig& cfg) {
  VerifyResult res;
  const VectorField& x = *cfg.field;
  const int n = x.base_dim();
  auto add = [&res](std::vector<CheckReport> r) { res.checks.insert(res.checks.end(), r.begin(), r.end()); };

  add(structural_identities(n, 6, cfg.samples, cfg.seed));

  std::vector<SmoothMap> maps = fd_catalog();
  maps.push_back(x.fiber_map());
  if (cfg.spray) maps.push_back(cfg.spray->coefficient());
  res.checks.push_back(dual_vs_fd(maps, cfg.samples, cfg.tol.fd, cfg.seed + 5));

  add(local_forms(x, 3, cfg));
  if (cfg.spray) add(spray_checks(*cfg.spray, cfg));

  TowerOptions opt;
  opt.max_order = cfg.max_order;
  opt.coordinate_budget = cfg.coordinate_budget;
  opt.samples = cfg.samples;
  opt.tol = cfg.tol.identity;
  opt.homogeneity_tol = cfg.tol.homogeneity;
  opt.seed = cfg.seed;
  if (x.level() >= 1) {
    const LiftTower tower = cfg.spray ? build_tower(*cfg.spray, cfg.depth, opt) : build_tower(x, cfg.depth, opt);
    add(tower.structural());
    const std::vector<CheckReport> proj = check_projective_field(tower, cfg.samples, cfg.tol.identity, cfg.seed + 3);
    res.checks.push_back(summarize("projective_field", proj, cfg.tol.identity));
    add(proj);
    res.checks.push_back(flow_conjugation(tower, cfg));
    res.checks.push_back(tower_threading(tower, cfg));
  } else {
    res.notes.push_back("tower checks skipped: the field lives on level 0");
  }

  const ScalarFunction square(0, 1, parse_map(1, {"x0^2"}));
  res.checks.push_back(
      check_projective_function(square, {TangentElement(2, 1, {1.0, 1.0, 1.0, 1.0})}, cfg.tol.negative_threshold));

  add(closed_form_suite());
  if (cfg.spray) add(loop_checks(*cfg.spray, cfg));
  return res;
}

}  // namespace tinf::cli
