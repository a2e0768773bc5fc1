#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "tinf/loop_space.hpp"
#include "tinf/tower.hpp"
#include "verify.hpp"

namespace tinf::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

template <class T>
void write_csv_file(const fs::path& path, const T& traj) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  write_csv(f, traj);
}

nlohmann::json header(const RunConfig& cfg, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = cfg.source;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["object"] = cfg.spray ? cfg.spray->name() : cfg.field->name();
  j["depth"] = cfg.depth;
  j["flow"] = {{"t0", cfg.flow.t0}, {"t1", cfg.flow.t1}, {"dt", cfg.flow.step()}, {"steps", cfg.flow.steps()}};
  return j;
}

void emit(const RunConfig& cfg, const nlohmann::json& report, std::ostream& out) {
  write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
  out << report.dump(2) << '\n';
}

TowerOptions tower_options(const RunConfig& cfg) {
  TowerOptions opt;
  opt.max_order = cfg.max_order;
  opt.coordinate_budget = cfg.coordinate_budget;
  opt.samples = cfg.samples;
  opt.tol = cfg.tol.identity;
  opt.homogeneity_tol = cfg.tol.homogeneity;
  opt.seed = cfg.seed;
  return opt;
}

void write_threading(const fs::path& path, const TowerRun& run) {
  std::string text = "t";
  for (std::size_t i = 0; i + 1 < run.trajectories.size(); ++i) {
    text += ",pair_" + std::to_string(i + 1) + "_" + std::to_string(i);
  }
  text += '\n';
  const Trajectory& base = run.trajectories.front();
  char buf[64];
  for (std::size_t k = 0; k < base.states.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", base.times[k]);
    text += buf;
    for (std::size_t i = 0; i + 1 < run.trajectories.size(); ++i) {
      const double d =
          max_abs_diff(tangent_proj(run.trajectories[i + 1].states[k]), run.trajectories[i].states[k]);
      std::snprintf(buf, sizeof buf, ",%.17g", d);
      text += buf;
    }
    text += '\n';
  }
  write_file(path, text);
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (cfg.coordinate_budget == 0) {
    if (auto b = budget_from_env()) cfg.coordinate_budget = *b;
  }
  if (o.depth) {
    if (*o.depth < 0) throw ConfigError("--depth must be non-negative");
    cfg.depth = *o.depth;
    cfg.tower = true;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out_dir = *o.out;
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw ConfigError("--tol must be positive");
    cfg.tol.identity = *o.tol;
    cfg.tol.local = *o.tol;
  }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const VerifyResult res = verify_suite(cfg);
  nlohmann::json report = header(cfg, "verify");
  report["checks"] = to_json(res.checks);
  report["notes"] = res.notes;
  const bool ok = all_ok(res.checks);
  report["passed"] = ok;
  emit(cfg, report, out);
  return ok ? kExitOk : kExitRuntime;
}

int cmd_geodesic(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.spray) throw ConfigError("geodesic needs a spray config");
  if (cfg.x0.empty() || cfg.v0.empty()) throw ConfigError("geodesic needs initial.x0 and initial.v0");
  const Semispray& s = *cfg.spray;
  const TangentElement x0(s.level() - 1, s.base_dim(), cfg.x0);
  const TangentElement v0(s.level() - 1, s.base_dim(), cfg.v0);
  nlohmann::json report = header(cfg, "geodesic");
  if (!cfg.tower) {
    const Trajectory t = integrate_geodesic(s, x0, v0, cfg.flow);
    write_csv_file(cfg.out_dir / "geodesic.csv", t);
    report["final_state"] = t.final_state().values();
    report["files"] = {"geodesic.csv"};
    report["passed"] = true;
    emit(cfg, report, out);
    return kExitOk;
  }
  const LiftTower tower = build_tower(s, cfg.depth, tower_options(cfg));
  const TowerState p = lift_state(x0, cfg.depth);
  const TowerState v = lift_state(v0, cfg.depth);
  const TowerRun run = tower_geodesic(tower, p, v, cfg.flow, cfg.tol.identity);
  nlohmann::json files = nlohmann::json::array();
  nlohmann::json finals = nlohmann::json::array();
  for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
    const std::string name = "geodesic_level" + std::to_string(i) + ".csv";
    write_csv_file(cfg.out_dir / name, run.trajectories[i]);
    files.push_back(name);
    finals.push_back(run.trajectories[i].final_state().values());
  }
  write_threading(cfg.out_dir / "threading.csv", run);
  files.push_back("threading.csv");
  report["files"] = files;
  report["final_states"] = finals;
  report["tower"] = to_json(tower);
  report["consistency"] = to_json(run.consistency);
  const bool ok = all_ok(run.consistency);
  report["passed"] = ok;
  emit(cfg, report, out);
  return ok ? kExitOk : kExitRuntime;
}

int cmd_flow(const RunConfig& cfg, bool check_conjugation, std::ostream& out) {
  if (!cfg.field) throw ConfigError("flow needs a field or spray config");
  if (cfg.xi0.empty()) throw ConfigError("flow needs initial.xi0");
  const VectorField& x = *cfg.field;
  const TangentElement xi0(x.level(), x.base_dim(), cfg.xi0);
  nlohmann::json report = header(cfg, "flow");
  std::vector<CheckReport> checks;
  bool ok = true;

  if (cfg.lifetime_bound) {
    FlowSpec spec = cfg.flow;
    spec.blowup_bound = *cfg.lifetime_bound;
    const double life = lifetime_probe(x, xi0, spec);
    report["lifetime"] = {{"bound", spec.blowup_bound}, {"time", life}, {"reached_t1", life >= spec.t1}};
  }

  if (check_conjugation) {
    std::vector<double> dir = cfg.direction.empty() ? std::vector<double>(x.dim(), 1.0) : cfg.direction;
    const TangentElement xi = join(xi0, TangentElement(x.level(), x.base_dim(), dir));
    const TangentElement a = flow_map_tangent(x, xi, cfg.flow);
    const TangentElement b = integrate_field(complete_lift_field(x, cfg.max_order), xi, cfg.flow).final_state();
    CheckReport rep{"flow_conjugation", 0.0, cfg.tol.conjugation, 1};
    for (std::size_t i = 0; i < a.size(); ++i) {
      rep.record(std::abs(a.values()[i] - b.values()[i]) / std::max(1.0, std::abs(b.values()[i])));
    }
    report["conjugation"] = {{"flow_map_tangent", a.values()}, {"lifted_field", b.values()}};
    checks.push_back(rep);
  }

  nlohmann::json files = nlohmann::json::array();
  if (!cfg.tower) {
    Trajectory t;
    try {
      t = integrate_field(x, xi0, cfg.flow);
    } catch (const IntegrationError& e) {
      // A requested lifetime probe expects the blow-up; keep what was computed.
      if (!cfg.lifetime_bound) throw;
      t = e.partial();
      report["stopped"] = {{"reason", e.what()}, {"last_valid_time", e.last_valid_time()}};
    }
    write_csv_file(cfg.out_dir / "flow.csv", t);
    files.push_back("flow.csv");
    report["final_state"] = t.final_state().values();
  } else {
    const LiftTower tower = build_tower(x, cfg.depth, tower_options(cfg));
    const TowerState init = lift_state(xi0, cfg.depth, std::nullopt, Threading::tangent_projection);
    const TowerRun run = tower_flow(tower, init, cfg.flow, cfg.tol.identity);
    nlohmann::json finals = nlohmann::json::array();
    for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
      const std::string name = "flow_level" + std::to_string(i) + ".csv";
      write_csv_file(cfg.out_dir / name, run.trajectories[i]);
      files.push_back(name);
      finals.push_back(run.trajectories[i].final_state().values());
    }
    write_threading(cfg.out_dir / "threading.csv", run);
    files.push_back("threading.csv");
    report["final_states"] = finals;
    report["tower"] = to_json(tower);
    report["consistency"] = to_json(run.consistency);
    checks.insert(checks.end(), run.consistency.begin(), run.consistency.end());
  }
  ok = all_ok(checks);
  report["files"] = files;
  report["checks"] = to_json(checks);
  report["passed"] = ok;
  emit(cfg, report, out);
  return ok ? kExitOk : kExitRuntime;
}

int cmd_loop(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.spray) throw ConfigError("loop needs a spray section");
  const Semispray& s = *cfg.spray;
  const int n = s.base_dim();
  Rng rng(cfg.seed);
  std::vector<CheckReport> checks;
  for (std::size_t count : cfg.loop_check_sizes) {
    std::vector<TangentElement> samples;
    for (std::size_t j = 0; j < count; ++j) samples.push_back(random_element(s.level() + 1, n, rng));
    CheckReport rep = loop_lift_commutes(s, LoopPoint(std::move(samples)), cfg.tol.identity);
    rep.name += "[N=" + std::to_string(count) + "]";
    checks.push_back(rep);
  }

  auto make_loop = [&](const std::optional<Rows>& rows) {
    std::vector<TangentElement> samples;
    for (std::size_t j = 0; j < cfg.loop_samples; ++j) {
      samples.push_back(rows ? TangentElement(s.level() - 1, n, (*rows)[j])
                             : random_element(s.level() - 1, n, rng, -0.5, 0.5));
    }
    return LoopPoint(std::move(samples));
  };
  const LoopPoint c0 = make_loop(cfg.loop_positions);
  const LoopPoint v0 = make_loop(cfg.loop_velocities);
  const LoopTrajectory traj = loop_geodesic(s, c0, v0, cfg.flow);
  write_csv_file(cfg.out_dir / "loop.csv", traj);

  nlohmann::json report = header(cfg, "loop");
  report["loop_samples"] = cfg.loop_samples;
  report["files"] = {"loop.csv"};
  report["checks"] = to_json(checks);
  nlohmann::json finals = nlohmann::json::array();
  for (const TangentElement& e : traj.states.back().samples()) finals.push_back(e.values());
  report["final_states"] = finals;
  const bool ok = all_ok(checks);
  report["passed"] = ok;
  emit(cfg, report, out);
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace tinf::cli
