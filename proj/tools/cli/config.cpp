#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "tinf/errors.hpp"

namespace tinf::cli {

namespace {

namespace fs = std::filesystem;

template <class T>
T get(const YAML::Node& node, const std::string& key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::vector<double> numbers(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) throw ConfigError(what + " must be a list of numbers");
  std::vector<double> out;
  for (const YAML::Node& v : node) {
    try {
      out.push_back(v.as<double>());
    } catch (const YAML::Exception&) {
      throw ConfigError(what + " must be a list of numbers");
    }
  }
  return out;
}

Rows rows(const YAML::Node& node, std::size_t width, const std::string& what) {
  if (!node.IsSequence()) throw ConfigError(what + " must be a list of rows");
  Rows out;
  for (const YAML::Node& r : node) {
    out.push_back(numbers(r, what + " row"));
    if (out.back().size() != width) {
      throw ConfigError(what + " rows must have " + std::to_string(width) + " entries");
    }
  }
  if (out.size() < 3) throw ConfigError(what + " needs at least 3 samples");
  return out;
}

std::vector<std::string> strings(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) throw ConfigError(what + " must be a list of expressions");
  std::vector<std::string> out;
  for (const YAML::Node& v : node) out.push_back(v.as<std::string>());
  return out;
}

std::vector<std::string> expressions(const YAML::Node& def, const fs::path& base_dir, const std::string& what) {
  if (def["expressions"]) return strings(def["expressions"], what + ".expressions");
  if (def["expression_file"]) return read_expression_file(base_dir / def["expression_file"].as<std::string>());
  throw ConfigError(what + " needs a catalog name, expressions or an expression_file");
}

Semispray parse_spray(const YAML::Node& def, const fs::path& base_dir) {
  if (!def.IsMap()) throw ConfigError("spray must be a mapping");
  const int n = get<int>(def, "base_dim", 0);
  if (def["catalog"]) {
    const std::string name = def["catalog"].as<std::string>();
    return catalog::by_name(name, n == 0 ? (name == "sphere" ? 2 : 1) : n);
  }
  if (n < 1) throw ConfigError("spray.base_dim must be a positive integer");
  if (def["gamma"]) return catalog::quadratic(n, numbers(def["gamma"], "spray.gamma"));
  SprayFlags flags{get<bool>(def, "homogeneous", false), {}};
  return spray_from_expressions(n, expressions(def, base_dir, "spray"), get<std::string>(def, "name", "custom"), flags);
}

VectorField parse_field(const YAML::Node& def, const fs::path& base_dir) {
  if (!def.IsMap()) throw ConfigError("field must be a mapping");
  const int level = get<int>(def, "level", 0);
  const int n = get<int>(def, "base_dim", 1);
  if (level < 0 || level > kDefaultMaxOrder) throw ConfigError("field.level out of range");
  if (n < 1) throw ConfigError("field.base_dim must be a positive integer");
  const std::size_t d = (std::size_t{1} << level) * static_cast<std::size_t>(n);
  if (def["catalog"]) {
    const std::string name = def["catalog"].as<std::string>();
    if (name == "zero") return VectorField(level, n, zero(d, d), "zero");
    if (name == "linear") {
      const double a = get<double>(def, "rate", 1.0);
      return VectorField(level, n, scale(a, identity(d)), "linear");
    }
    if (name == "harmonic") {
      if (level < 1) throw ConfigError("the harmonic field needs level >= 1");
      // (x, y) -> (y, -x)
      std::vector<int> lower(d / 2), upper(d / 2);
      for (std::size_t i = 0; i < d / 2; ++i) {
        lower[i] = static_cast<int>(i);
        upper[i] = static_cast<int>(d / 2 + i);
      }
      return VectorField(level, n, concat({select(d, upper), scale(-1.0, select(d, lower))}), "harmonic");
    }
    throw ConfigError("unknown catalog field '" + name + "'");
  }
  return VectorField(level, n, parse_map(d, expressions(def, base_dir, "field")), get<std::string>(def, "name", "custom"));
}

void parse_loop(const YAML::Node& def, const fs::path& base_dir, int base_dim, RunConfig& cfg) {
  if (!def.IsMap()) throw ConfigError("loop must be a mapping");
  cfg.loop_samples = get<std::size_t>(def, "samples", cfg.loop_samples);
  if (cfg.loop_samples < 3) throw ConfigError("loop.samples must be at least 3");
  if (def["check_sizes"]) {
    cfg.loop_check_sizes.clear();
    for (double v : numbers(def["check_sizes"], "loop.check_sizes")) {
      if (v < 3 || v != std::floor(v)) throw ConfigError("loop.check_sizes entries must be integers >= 3");
      cfg.loop_check_sizes.push_back(static_cast<std::size_t>(v));
    }
  }
  if (def["file"]) load_loop_file(base_dir / def["file"].as<std::string>(), base_dim, cfg);
  if (def["positions"]) cfg.loop_positions = rows(def["positions"], static_cast<std::size_t>(base_dim), "loop.positions");
  if (def["velocities"]) {
    cfg.loop_velocities = rows(def["velocities"], static_cast<std::size_t>(base_dim), "loop.velocities");
  }
  if (cfg.loop_positions) cfg.loop_samples = cfg.loop_positions->size();
  if (cfg.loop_velocities && (!cfg.loop_positions || cfg.loop_velocities->size() != cfg.loop_positions->size())) {
    throw ConfigError("loop velocities need positions of the same length");
  }
}

RunConfig build(const YAML::Node& root, const fs::path& base_dir) {
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  RunConfig cfg;
  const std::string kind = get<std::string>(root, "kind", "");
  if (kind == "field") {
    cfg.kind = ObjectKind::field;
  } else if (kind == "spray") {
    cfg.kind = ObjectKind::spray;
  } else if (kind == "loop") {
    cfg.kind = ObjectKind::loop;
  } else {
    throw ConfigError("config kind must be field, spray or loop");
  }

  if (cfg.kind == ObjectKind::field) {
    if (!root["field"]) throw ConfigError("field config needs a 'field' section");
    cfg.field = parse_field(root["field"], base_dir);
  } else {
    if (!root["spray"]) throw ConfigError("spray and loop configs need a 'spray' section");
    cfg.spray = parse_spray(root["spray"], base_dir);
    cfg.field = semispray_to_field(*cfg.spray);
  }
  const int n = cfg.field->base_dim();

  cfg.depth = get<int>(root, "depth", cfg.depth);
  if (cfg.depth < 0) throw ConfigError("depth must be non-negative");
  cfg.tower = get<bool>(root, "tower", false);
  cfg.samples = get<int>(root, "samples", cfg.samples);
  if (cfg.samples < 1) throw ConfigError("samples must be positive");
  cfg.seed = get<std::uint64_t>(root, "seed", cfg.seed);
  cfg.max_order = get<int>(root, "max_order", cfg.max_order);
  if (cfg.max_order < 1) throw ConfigError("max_order must be positive");
  cfg.coordinate_budget = get<std::size_t>(root, "coordinate_budget", 0);
  if (root["output"]) cfg.out_dir = root["output"].as<std::string>();

  if (const YAML::Node f = root["flow"]) {
    if (!f.IsMap()) throw ConfigError("flow must be a mapping");
    cfg.flow.t0 = get<double>(f, "t0", cfg.flow.t0);
    cfg.flow.t1 = get<double>(f, "t1", cfg.flow.t1);
    cfg.flow.dt = get<double>(f, "dt", cfg.flow.dt);
    cfg.flow.thin = get<int>(f, "thin", cfg.flow.thin);
    cfg.flow.max_steps = get<std::int64_t>(f, "max_steps", cfg.flow.max_steps);
    cfg.flow.blowup_bound = get<double>(f, "blowup_bound", cfg.flow.blowup_bound);
  }
  cfg.flow.validate();

  if (const YAML::Node init = root["initial"]) {
    if (!init.IsMap()) throw ConfigError("initial must be a mapping");
    if (init["x0"]) cfg.x0 = numbers(init["x0"], "initial.x0");
    if (init["v0"]) cfg.v0 = numbers(init["v0"], "initial.v0");
    if (init["xi0"]) cfg.xi0 = numbers(init["xi0"], "initial.xi0");
    if (init["direction"]) cfg.direction = numbers(init["direction"], "initial.direction");
  }
  const std::size_t pos_dim = cfg.spray ? cfg.spray->dim() / 2 : 0;
  if (!cfg.x0.empty() && cfg.x0.size() != pos_dim) throw ConfigError("initial.x0 has the wrong length");
  if (!cfg.v0.empty() && cfg.v0.size() != pos_dim) throw ConfigError("initial.v0 has the wrong length");
  if (!cfg.xi0.empty() && cfg.xi0.size() != cfg.field->dim()) throw ConfigError("initial.xi0 has the wrong length");
  if (!cfg.direction.empty() && cfg.direction.size() != cfg.field->dim()) {
    throw ConfigError("initial.direction has the wrong length");
  }

  if (const YAML::Node lt = root["lifetime"]) cfg.lifetime_bound = get<double>(lt, "bound", 1e9);
  if (root["loop"]) parse_loop(root["loop"], base_dir, n, cfg);
  if (cfg.kind == ObjectKind::loop && !root["loop"]) throw ConfigError("loop config needs a 'loop' section");

  if (const YAML::Node t = root["tolerances"]) {
    if (!t.IsMap()) throw ConfigError("tolerances must be a mapping");
    cfg.tol.identity = get<double>(t, "identity", cfg.tol.identity);
    cfg.tol.local = get<double>(t, "local", cfg.tol.local);
    cfg.tol.homogeneity = get<double>(t, "homogeneity", cfg.tol.homogeneity);
    cfg.tol.fd = get<double>(t, "fd", cfg.tol.fd);
    cfg.tol.conjugation = get<double>(t, "conjugation", cfg.tol.conjugation);
    cfg.tol.speed = get<double>(t, "speed", cfg.tol.speed);
    cfg.tol.negative_threshold = get<double>(t, "negative_threshold", cfg.tol.negative_threshold);
  }
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  try {
    return build(root, base_dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    // Errors in definitions count as config errors.
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config(ss.str(), path.parent_path());
  cfg.source = path.string();
  return cfg;
}

void load_loop_file(const fs::path& path, int base_dim, RunConfig& cfg) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("cannot read loop file " + path.string() + ": " + e.what());
  }
  if (!root.IsMap() || !root["positions"]) throw ConfigError("loop file needs a 'positions' list");
  try {
    cfg.loop_positions = rows(root["positions"], static_cast<std::size_t>(base_dim), "loop file positions");
    if (root["velocities"]) {
      cfg.loop_velocities = rows(root["velocities"], static_cast<std::size_t>(base_dim), "loop file velocities");
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError("malformed loop file " + path.string() + ": " + e.what());
  }
}

std::vector<std::string> read_expression_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read expression file " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(line);
  }
  if (out.empty()) throw ConfigError("expression file " + path.string() + " is empty");
  return out;
}

std::optional<std::size_t> budget_from_env() {
  const char* v = std::getenv("TINF_COORD_BUDGET");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long long b = std::strtoll(v, &end, 10);
  if (*end != '\0' || b <= 0) throw ConfigError("TINF_COORD_BUDGET must be a positive integer");
  return static_cast<std::size_t>(b);
}

}  // namespace tinf::cli
