#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "tinf/flows.hpp"
#include "tinf/report.hpp"
#include "tinf/sprays.hpp"

namespace tinf {

enum class TowerKind { field, spray };

struct TowerOptions {
  int max_order = kDefaultMaxOrder;
  /// Largest chart dimension any level may use; 0 means 2^7 * base_dim.
  std::size_t coordinate_budget = 0;
  /// Sample count and tolerance of the structural checks run while building.
  int samples = 100;
  double tol = 1e-12;
  std::vector<double> lambdas = {2.0, -1.0, 0.5, 0.0};
  double homogeneity_tol = 1e-10;
  std::uint64_t seed = 42;
};

std::size_t default_coordinate_budget(int base_dim);

/// Levels 0..R of iterated complete lifts of one field or spray.
///
/// Level i lives on T^(L+i) M, where L >= 1 is the level of the base.
class LiftTower {
 public:
  TowerKind kind() const noexcept { return kind_; }
  int depth() const noexcept { return static_cast<int>(fields_.size()) - 1; }
  int base_level() const noexcept { return fields_.front().level(); }
  int base_dim() const noexcept { return fields_.front().base_dim(); }

  /// Level i as a vector field (the induced field for spray towers).
  const VectorField& field(int i) const { return fields_.at(static_cast<std::size_t>(i)); }
  /// Level i spray. Only for spray towers.
  const Semispray& spray(int i) const;

  /// Reports of the checks run during the build.
  const std::vector<CheckReport>& structural() const noexcept { return structural_; }

  /// Copy with level i swapped for another field of the same shape,
  /// without any checks. For exercising the verifiers.
  LiftTower with_level(int i, VectorField replacement) const;

 private:
  friend LiftTower build_tower(const VectorField&, int, const TowerOptions&);
  friend LiftTower build_tower(const Semispray&, int, const TowerOptions&);

  TowerKind kind_ = TowerKind::field;
  std::vector<VectorField> fields_;
  std::vector<Semispray> sprays_;
  std::vector<CheckReport> structural_;
};

/// Builds levels[i+1] = levels[i]^c up to depth R and checks every level.
/// OrderError when the top level exceeds `max_order` or the coordinate
/// budget; StructuralError when a structural check fails.
LiftTower build_tower(const VectorField& base, int depth, const TowerOptions& options = {});
LiftTower build_tower(const Semispray& base, int depth, const TowerOptions& options = {});

/// How consecutive entries of a TowerState are related.
enum class Threading {
  /// states[i] = proj(states[i+1]).
  projection,
  /// states[i] = D pi(states[i+1]), i.e. proj applied to base and fiber
  /// separately. This is the relation respected by complete lifts of fields.
  tangent_projection,
};

/// Threaded family of elements, states[i].order() = states[0].order() + i.
struct TowerState {
  Threading threading = Threading::projection;
  std::vector<TangentElement> states;

  int depth() const noexcept { return static_cast<int>(states.size()) - 1; }
  /// Max deviation of the threading condition over consecutive pairs.
  double threading_deviation() const;
};

/// Applies the connecting map of `threading` once.
TangentElement thread_down(const TangentElement& e, Threading threading);

/// Threaded state of depth R with states[0] = xi_base. The blocks not
/// determined by the threading are copied from `seed` when given, zero
/// otherwise.
TowerState lift_state(const TangentElement& xi_base, int depth, const std::optional<TowerState>& seed = std::nullopt,
                      Threading threading = Threading::projection);

/// Random top element of order base_order + depth, threaded down.
TowerState random_state(int base_order, int base_dim, int depth, Threading threading, Rng& rng);

/// D^2 pi_(j,i) o X^(c_j) = X^(c_i) o D pi_(j,i) on random threaded states.
/// One report per adjacent pair, then one per non-adjacent pair.
std::vector<CheckReport> check_projective_field(const LiftTower& tower, int samples, double tol = 1e-12,
                                                std::uint64_t seed = 42);

/// The function analogue f^(c_(k-1)) o pi = f^(c_k), evaluated at each point
/// (order k + f.level()). Expected not to hold: the report fails its
/// expectation unless the deviation exceeds `threshold`.
CheckReport check_projective_function(const ScalarFunction& f, const std::vector<TangentElement>& points,
                                      double threshold = 0.1);

/// Largest deviation across a list of reports, under a new name.
CheckReport summarize(const std::string& name, const std::vector<CheckReport>& reports, double tol);

struct TowerRun {
  std::vector<Trajectory> trajectories;
  /// One report per adjacent pair: D pi of level i+1 against level i over
  /// every stored step.
  std::vector<CheckReport> consistency;
};

/// Geodesics of every spray level from threaded positions and velocities
/// (projection threading, positions of level i have order L-1+i).
TowerRun tower_geodesic(const LiftTower& tower, const TowerState& positions, const TowerState& velocities,
                        const FlowSpec& spec, double tol = 1e-12);

/// Integral curves of every level from a tangent-projection threaded state.
TowerRun tower_flow(const LiftTower& tower, const TowerState& init, const FlowSpec& spec, double tol = 1e-12);

nlohmann::json to_json(const LiftTower& tower);

}  // namespace tinf
