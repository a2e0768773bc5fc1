#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tinf/flows.hpp"

namespace {

using namespace tinf::cli;

struct Flags {
  std::string config;
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> tol;
  bool check_conjugation = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "YAML run config")->required();
  sub->add_option("--depth", f.depth, "tower depth R (enables tower mode)");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--tol", f.tol, "identity tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated tangent bundles: lifts, sprays, flows and towers"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* verify = app.add_subcommand("verify", "run every identity check on the configured object");
  CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a geodesic (one file per level in tower mode)");
  CLI::App* flow = app.add_subcommand("flow", "integrate a field (one file per level in tower mode)");
  CLI::App* loop = app.add_subcommand("loop", "loop-space lift commutation and loop geodesics");
  for (CLI::App* sub : {verify, geodesic, flow, loop}) add_common(sub, flags);
  flow->add_flag("--check-conjugation", flags.check_conjugation, "compare the tangent flow with the lifted field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  try {
    cfg = load_config(flags.config);
    Overrides o;
    o.depth = flags.depth;
    o.seed = flags.seed;
    if (flags.out) o.out = *flags.out;
    o.tol = flags.tol;
    apply_overrides(cfg, o);
  } catch (const tinf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*verify) return cmd_verify(cfg, std::cout);
    if (*geodesic) return cmd_geodesic(cfg, std::cout);
    if (*flow) return cmd_flow(cfg, flags.check_conjugation, std::cout);
    return cmd_loop(cfg, std::cout);
  } catch (const tinf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const tinf::IntegrationError& e) {
    std::cerr << "integration failed: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
