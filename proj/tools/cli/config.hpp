#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tinf/flows.hpp"
#include "tinf/sprays.hpp"

namespace tinf::cli {

enum class ObjectKind { field, spray, loop };

struct Tolerances {
  double identity = 1e-12;
  double local = 1e-12;
  double homogeneity = 1e-10;
  double fd = 1e-6;
  double conjugation = 1e-10;
  double speed = 1e-6;
  double negative_threshold = 0.1;
};

using Rows = std::vector<std::vector<double>>;

/// Everything a command needs, validated at load time.
struct RunConfig {
  ObjectKind kind = ObjectKind::spray;
  std::optional<Semispray> spray;
  std::optional<VectorField> field;

  int depth = 3;
  bool tower = false;
  FlowSpec flow;

  std::vector<double> x0, v0, xi0;
  /// Fiber of the element the conjugation check starts from (flow).
  std::vector<double> direction;
  std::optional<double> lifetime_bound;

  std::size_t loop_samples = 8;
  std::vector<std::size_t> loop_check_sizes = {3, 8, 32};
  std::optional<Rows> loop_positions, loop_velocities;

  int samples = 100;
  std::uint64_t seed = 42;
  Tolerances tol;
  int max_order = kDefaultMaxOrder;
  std::size_t coordinate_budget = 0;
  std::filesystem::path out_dir = ".";
  std::string source;
};

/// Reads a YAML config. Relative file references resolve against the
/// config's directory. Throws ConfigError on anything malformed.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Reads a loop file: a mapping with `positions` and optional
/// `velocities`, each a list of at least 3 rows of base_dim numbers.
void load_loop_file(const std::filesystem::path& path, int base_dim, RunConfig& cfg);

/// One expression per non-empty line; '#' starts a comment.
std::vector<std::string> read_expression_file(const std::filesystem::path& path);

/// Coordinate budget from TINF_COORD_BUDGET, if set. ConfigError when it
/// is not a positive integer.
std::optional<std::size_t> budget_from_env();

}  // namespace tinf::cli
