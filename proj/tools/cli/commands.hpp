#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "config.hpp"

namespace tinf::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct Overrides {
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<double> tol;
  bool check_conjugation = false;
};

/// Command-line flags win over the config file, which wins over the
/// environment's coordinate budget.
void apply_overrides(RunConfig& cfg, const Overrides& o);

int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_geodesic(const RunConfig& cfg, std::ostream& out);
int cmd_flow(const RunConfig& cfg, bool check_conjugation, std::ostream& out);
int cmd_loop(const RunConfig& cfg, std::ostream& out);

}  // namespace tinf::cli
