#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tinf/errors.hpp"
#include "tinf/lifts.hpp"
#include "tinf/sprays.hpp"

namespace tinf {

/// Fixed-step fourth-order Runge-Kutta window [t0, t1].
///
/// The number of steps is ceil((t1 - t0) / dt) and the step actually taken
/// is (t1 - t0) / steps, so the window is hit exactly.
struct FlowSpec {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-3;
  std::int64_t max_steps = 10'000'000;
  /// Max-norm of the state beyond which the trajectory counts as blown up.
  double blowup_bound = 1e9;
  /// Keep every `thin`-th state (the final state is always kept).
  int thin = 1;

  /// Throws ConfigError on dt <= 0, t1 <= t0, a step count over budget,
  /// or thin < 1.
  void validate() const;
  std::int64_t steps() const;
  double step() const;
};

/// Sampled integral curve.
struct Trajectory {
  int level = 0;
  int base_dim = 1;
  double dt = 0.0;
  std::string name;
  std::vector<double> times;
  std::vector<TangentElement> states;

  const TangentElement& final_state() const { return states.back(); }
};

/// Integration stopped early. Carries everything computed so far.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_valid_time, Trajectory partial)
      : Error(what + " (last valid time " + std::to_string(last_valid_time) + ")"),
        last_valid_time_(last_valid_time),
        partial_(std::move(partial)) {}

  double last_valid_time() const noexcept { return last_valid_time_; }
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  double last_valid_time_;
  Trajectory partial_;
};

/// d/dt xi = fiber of X at xi.
Trajectory integrate_field(const VectorField& x, const TangentElement& xi0, const FlowSpec& spec);

/// (x, y)' = (y, -2 G(x, y)) from (x0, v0); states are the order-level pairs.
Trajectory integrate_geodesic(const Semispray& s, const TangentElement& x0, const TangentElement& v0,
                              const FlowSpec& spec);

/// kappa o DF_t o kappa (xi), where DF_t is the exact derivative of the
/// discrete RK4 flow obtained by running the integrator on jets.
TangentElement flow_map_tangent(const VectorField& x, const TangentElement& xi, const FlowSpec& spec);

/// Last time reached before the state leaves the blow-up bound, becomes
/// non-finite or fails to evaluate; t1 when none of that happens.
double lifetime_probe(const VectorField& x, const TangentElement& xi0, const FlowSpec& spec);

/// One RK4 step of y' = rhs(y).
std::vector<double> rk4_step(const SmoothMap& rhs, std::span<const double> y, double h);
std::vector<Jet> rk4_step(const SmoothMap& rhs, std::span<const Jet> y, double h);

/// CSV header "t,b0_c0,b0_c1,..." (block-major), with an optional
/// sample_index column after t.
std::string csv_header(int order, int base_dim, bool with_sample_index = false);
void write_csv(std::ostream& out, const Trajectory& traj);
nlohmann::json to_json(const Trajectory& traj);

}  // namespace tinf
