#include "tinf/tower.hpp"

#include <algorithm>
#include <future>
#include <limits>

namespace tinf {

namespace {

std::size_t chart_dim(int level, int n) { return (std::size_t{1} << level) * static_cast<std::size_t>(n); }

void check_budget(int base_level, int base_dim, int depth, const TowerOptions& o) {
  if (depth < 0) throw OrderError("tower depth must be non-negative");
  const int top = base_level + depth;
  if (top > o.max_order) {
    throw OrderError("tower top level " + std::to_string(top) + " exceeds the maximum order " +
                     std::to_string(o.max_order));
  }
  const std::size_t budget = o.coordinate_budget ? o.coordinate_budget : default_coordinate_budget(base_dim);
  if (chart_dim(top, base_dim) > budget) {
    throw OrderError("tower top level uses " + std::to_string(chart_dim(top, base_dim)) +
                     " coordinates, over the budget of " + std::to_string(budget));
  }
}

CheckReport section_check(const VectorField& v, const TowerOptions& o, std::uint64_t seed) {
  CheckReport rep{"section", 0.0, o.tol, o.samples};
  Rng rng(seed);
  for (int k = 0; k < o.samples; ++k) {
    const TangentElement xi = random_element(v.level(), v.base_dim(), rng);
    rep.record(max_abs_diff(proj(v.section(xi)), xi));
  }
  return rep;
}

void require(CheckReport rep, std::vector<CheckReport>& out, int level) {
  rep.name = "tower_" + rep.name + "[" + std::to_string(level) + "]";
  out.push_back(rep);
  if (!rep.ok()) {
    throw StructuralError("tower level " + std::to_string(level) + " fails the " + rep.name + " check (deviation " +
                          std::to_string(rep.max_deviation) + ")");
  }
}

SmoothMap d_proj(int order, int n, int times) { return tangent_map(proj_map(order, n), times); }

TangentElement apply(const SmoothMap& m, const TangentElement& e, int out_order) {
  return TangentElement(out_order, e.base_dim(), m(e.flat()));
}

std::vector<CheckReport> consistency(const std::vector<Trajectory>& trajs, double tol) {
  std::vector<CheckReport> out;
  for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
    const Trajectory& lo = trajs[i];
    const Trajectory& hi = trajs[i + 1];
    CheckReport rep{"threading_" + std::to_string(i + 1) + "_" + std::to_string(i), 0.0, tol,
                    static_cast<int>(hi.states.size())};
    if (lo.states.size() != hi.states.size()) {
      rep.record(std::numeric_limits<double>::infinity());
    } else {
      for (std::size_t k = 0; k < hi.states.size(); ++k) {
        rep.record(max_abs_diff(tangent_proj(hi.states[k]), lo.states[k]));
      }
    }
    out.push_back(rep);
  }
  return out;
}

}  // namespace

std::size_t default_coordinate_budget(int base_dim) { return chart_dim(7, base_dim); }

const Semispray& LiftTower::spray(int i) const {
  if (kind_ != TowerKind::spray) throw StructuralError("field tower has no spray levels");
  return sprays_.at(static_cast<std::size_t>(i));
}

LiftTower LiftTower::with_level(int i, VectorField replacement) const {
  LiftTower t = *this;
  VectorField& slot = t.fields_.at(static_cast<std::size_t>(i));
  if (replacement.level() != slot.level() || replacement.base_dim() != slot.base_dim()) {
    throw DimensionError("replacement field has the wrong level or base dimension");
  }
  slot = std::move(replacement);
  return t;
}

LiftTower build_tower(const VectorField& base, int depth, const TowerOptions& options) {
  if (base.level() < 1) throw OrderError("tower base field must live on level >= 1");
  check_budget(base.level(), base.base_dim(), depth, options);
  LiftTower t;
  t.kind_ = TowerKind::field;
  t.fields_.push_back(base);
  for (int i = 0; i < depth; ++i) t.fields_.push_back(complete_lift_field(t.fields_.back(), options.max_order));
  for (int i = 0; i <= depth; ++i) {
    require(section_check(t.fields_[i], options, options.seed + i), t.structural_, i);
  }
  return t;
}

LiftTower build_tower(const Semispray& base, int depth, const TowerOptions& options) {
  check_budget(base.level(), base.base_dim(), depth, options);
  LiftTower t;
  t.kind_ = TowerKind::spray;
  t.sprays_.push_back(base);
  for (int i = 0; i < depth; ++i) t.sprays_.push_back(complete_lift_spray(t.sprays_.back(), options.max_order));
  for (int i = 0; i <= depth; ++i) {
    const Semispray& s = t.sprays_[i];
    t.fields_.push_back(semispray_to_field(s));
    const std::uint64_t seed = options.seed + i;
    require(section_check(t.fields_.back(), options, seed), t.structural_, i);
    require(is_semispray(t.fields_.back(), options.samples, options.tol, seed), t.structural_, i);
    if (s.flags().claimed_homogeneous) {
      require(homogeneity_check(s, options.lambdas, options.samples, options.homogeneity_tol, seed), t.structural_, i);
    }
  }
  return t;
}

TangentElement thread_down(const TangentElement& e, Threading threading) {
  return threading == Threading::projection ? proj(e) : tangent_proj(e);
}

double TowerState::threading_deviation() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    m = std::max(m, max_abs_diff(thread_down(states[i + 1], threading), states[i]));
  }
  return m;
}

namespace {

// Projection threading: each level appends a fiber taken from the seed.
std::vector<TangentElement> lift_chain(const TangentElement& base, int depth,
                                       const std::vector<TangentElement>* seed) {
  std::vector<TangentElement> out{base};
  for (int i = 0; i < depth; ++i) {
    const TangentElement& cur = out.back();
    TangentElement fiber(cur.order(), cur.base_dim());
    if (seed && static_cast<std::size_t>(i + 1) < seed->size()) {
      const TangentElement& s = (*seed)[i + 1];
      if (s.order() != cur.order() + 1 || s.base_dim() != cur.base_dim()) {
        throw DimensionError("lift_state: seed level " + std::to_string(i + 1) + " has the wrong shape");
      }
      fiber = s.fiber();
    }
    out.push_back(join(cur, fiber));
  }
  return out;
}

}  // namespace

TowerState lift_state(const TangentElement& xi_base, int depth, const std::optional<TowerState>& seed,
                      Threading threading) {
  if (depth < 0) throw OrderError("tower depth must be non-negative");
  TowerState st;
  st.threading = threading;
  if (threading == Threading::projection) {
    st.states = lift_chain(xi_base, depth, seed ? &seed->states : nullptr);
    return st;
  }
  if (xi_base.order() < 1) throw OrderError("tangent threading needs a base of order >= 1");
  std::vector<TangentElement> seed_base, seed_fiber;
  if (seed) {
    for (const TangentElement& s : seed->states) {
      seed_base.push_back(s.base());
      seed_fiber.push_back(s.fiber());
    }
  }
  const auto b = lift_chain(xi_base.base(), depth, seed ? &seed_base : nullptr);
  const auto f = lift_chain(xi_base.fiber(), depth, seed ? &seed_fiber : nullptr);
  for (int i = 0; i <= depth; ++i) st.states.push_back(join(b[i], f[i]));
  return st;
}

TowerState random_state(int base_order, int base_dim, int depth, Threading threading, Rng& rng) {
  TowerState st;
  st.threading = threading;
  st.states.resize(static_cast<std::size_t>(depth) + 1);
  st.states.back() = random_element(base_order + depth, base_dim, rng);
  for (int i = depth; i > 0; --i) st.states[i - 1] = thread_down(st.states[i], threading);
  return st;
}

std::vector<CheckReport> check_projective_field(const LiftTower& tower, int samples, double tol, std::uint64_t seed) {
  const int r = tower.depth();
  const int base = tower.base_level();
  const int n = tower.base_dim();
  std::vector<CheckReport> adjacent, composed;
  if (r == 0) {
    adjacent.push_back(CheckReport{"projective_adjacent", 0.0, tol, 0});
    return adjacent;
  }
  // The pair (i+1, i) uses pi between orders base+i and base+i-1.
  std::vector<SmoothMap> d1, d2;
  for (int i = 0; i < r; ++i) {
    d1.push_back(d_proj(base + i, n, 1));
    d2.push_back(d_proj(base + i, n, 2));
  }
  for (int i = 0; i < r; ++i) {
    adjacent.push_back(CheckReport{"projective_" + std::to_string(i + 1) + "_" + std::to_string(i), 0.0, tol, samples});
  }
  for (int j = 2; j <= r; ++j)
    for (int i = 0; i + 1 < j; ++i)
      composed.push_back(CheckReport{"projective_" + std::to_string(j) + "_" + std::to_string(i), 0.0, tol, samples});

  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    const TowerState st = random_state(base, n, r, Threading::tangent_projection, rng);
    std::size_t c = 0;
    for (int j = 1; j <= r; ++j) {
      TangentElement lhs = tower.field(j).section(st.states[j]);
      TangentElement point = st.states[j];
      for (int i = j - 1; i >= 0; --i) {
        lhs = apply(d2[i], lhs, base + i + 1);
        point = apply(d1[i], point, base + i);
        const double dev = max_abs_diff(lhs, tower.field(i).section(point));
        if (i == j - 1) {
          adjacent[i].record(dev);
        } else {
          // composed reports are ordered by j, then i
          composed[c + static_cast<std::size_t>(i)].record(dev);
        }
      }
      if (j >= 2) c += static_cast<std::size_t>(j - 1);
    }
  }
  adjacent.insert(adjacent.end(), composed.begin(), composed.end());
  return adjacent;
}

CheckReport check_projective_function(const ScalarFunction& f, const std::vector<TangentElement>& points,
                                      double threshold) {
  CheckReport rep{"function_lift_projective", 0.0, threshold, static_cast<int>(points.size()), false};
  for (const TangentElement& p : points) {
    const int k = p.order() - f.level();
    if (k < 2 || p.base_dim() != f.base_dim()) {
      throw OrderError("function projectivity check needs points at least two orders above the function");
    }
    ScalarFunction lo = f;
    for (int i = 0; i < k - 1; ++i) lo = complete_lift_function(lo);
    const ScalarFunction hi = complete_lift_function(lo);
    rep.record(std::abs(lo(proj(p)) - hi(p)));
  }
  return rep;
}

CheckReport summarize(const std::string& name, const std::vector<CheckReport>& reports, double tol) {
  CheckReport s{name, 0.0, tol, 0};
  for (const CheckReport& r : reports) {
    s.record(r.max_deviation);
    s.samples = std::max(s.samples, r.samples);
  }
  return s;
}

TowerRun tower_geodesic(const LiftTower& tower, const TowerState& positions, const TowerState& velocities,
                        const FlowSpec& spec, double tol) {
  if (tower.kind() != TowerKind::spray) throw StructuralError("tower_geodesic needs a spray tower");
  const int r = tower.depth();
  if (positions.depth() != r || velocities.depth() != r) throw DimensionError("initial data depth differs from tower depth");
  if (positions.threading_deviation() != 0.0 || velocities.threading_deviation() != 0.0) {
    throw DimensionError("tower_geodesic: initial data is not threaded");
  }
  spec.validate();
  std::vector<std::future<Trajectory>> jobs;
  for (int i = 0; i <= r; ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return integrate_geodesic(tower.spray(i), positions.states[i], velocities.states[i], spec);
    }));
  }
  TowerRun run;
  for (auto& j : jobs) run.trajectories.push_back(j.get());
  run.consistency = consistency(run.trajectories, tol);
  return run;
}

TowerRun tower_flow(const LiftTower& tower, const TowerState& init, const FlowSpec& spec, double tol) {
  const int r = tower.depth();
  if (init.depth() != r) throw DimensionError("initial state depth differs from tower depth");
  if (init.threading != Threading::tangent_projection || init.threading_deviation() != 0.0) {
    throw DimensionError("tower_flow: initial state must be threaded by the tangent projection");
  }
  spec.validate();
  std::vector<std::future<Trajectory>> jobs;
  for (int i = 0; i <= r; ++i) {
    jobs.push_back(
        std::async(std::launch::async, [&, i] { return integrate_field(tower.field(i), init.states[i], spec); }));
  }
  TowerRun run;
  for (auto& j : jobs) run.trajectories.push_back(j.get());
  run.consistency = consistency(run.trajectories, tol);
  return run;
}

nlohmann::json to_json(const LiftTower& tower) {
  nlohmann::json j;
  j["kind"] = tower.kind() == TowerKind::field ? "field" : "spray";
  j["depth"] = tower.depth();
  j["base_level"] = tower.base_level();
  j["base_dim"] = tower.base_dim();
  nlohmann::json levels = nlohmann::json::array();
  for (int i = 0; i <= tower.depth(); ++i) {
    levels.push_back({{"level", i},
                      {"order", tower.field(i).level()},
                      {"coordinates", tower.field(i).dim()},
                      {"name", tower.field(i).name()}});
  }
  j["levels"] = std::move(levels);
  j["structural"] = to_json(tower.structural());
  return j;
}

}  // namespace tinf
