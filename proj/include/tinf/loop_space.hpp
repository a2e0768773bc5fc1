#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tinf/flows.hpp"
#include "tinf/report.hpp"
#include "tinf/sprays.hpp"

namespace tinf {

/// Closed curve sampled at N >= 3 points, all of one order and base
/// dimension. Indices wrap modulo N.
class LoopPoint {
 public:
  explicit LoopPoint(std::vector<TangentElement> samples);

  std::size_t size() const noexcept { return samples_.size(); }
  int order() const noexcept { return samples_.front().order(); }
  int base_dim() const noexcept { return samples_.front().base_dim(); }
  const TangentElement& operator[](std::ptrdiff_t i) const;
  const std::vector<TangentElement>& samples() const noexcept { return samples_; }

 private:
  std::vector<TangentElement> samples_;
};

/// Evaluation failure at one loop sample.
class SampleError : public EvaluationError {
 public:
  SampleError(const std::string& what, std::size_t sample)
      : EvaluationError(what + " (loop sample " + std::to_string(sample) + ")"), sample_(sample) {}
  std::size_t sample_index() const noexcept { return sample_; }

 private:
  std::size_t sample_;
};

/// Operator acting on each loop sample independently.
class LoopOperator {
 public:
  using Fn = std::function<TangentElement(const TangentElement&)>;

  LoopOperator(Fn fn, std::string name = {}) : fn_(std::move(fn)), name_(std::move(name)) {}

  /// D^r f applied to an order-r sample.
  static LoopOperator from_map(SmoothMap f);
  static LoopOperator kappa();
  /// Sample xi -> fiber of the field at xi.
  static LoopOperator fiber_of(VectorField v);
  static LoopOperator identity();

  TangentElement operator()(const TangentElement& xi) const { return fn_(xi); }
  const std::string& name() const noexcept { return name_; }

  /// next o this.
  LoopOperator then(const LoopOperator& next) const;

 private:
  Fn fn_;
  std::string name_;
};

/// H^1(op)(c)(t) = op(c(t)).
LoopPoint pointwise_apply(const LoopOperator& op, const LoopPoint& c);

/// The loop as one element of order r over the product chart R^(N n).
TangentElement to_product(const LoopPoint& c);
LoopPoint from_product(const TangentElement& e, int base_dim);

/// H^1 S: the spray acting on all samples at once, as one semispray over
/// the product chart.
Semispray pointwise_spray(const Semispray& s, std::size_t samples);

/// Compares the complete lift of H^1 S (lifted in the product chart) with
/// H^1 applied to S^c, as induced fields at the samples of c (order
/// s.level() + 1).
CheckReport loop_lift_commutes(const Semispray& s, const LoopPoint& c, double tol = 1e-12);

struct LoopTrajectory {
  std::vector<double> times;
  /// states[k] holds the (x, y) pair of every sample at times[k].
  std::vector<LoopPoint> states;
  double dt = 0.0;
  std::string name;
};

/// Geodesic of H^1 S from per-sample positions and velocities.
LoopTrajectory loop_geodesic(const Semispray& s, const LoopPoint& c0, const LoopPoint& v0, const FlowSpec& spec);

/// Rows "t,sample_index,b0_c0,..." one per sample and time.
void write_csv(std::ostream& out, const LoopTrajectory& traj);

}  // namespace tinf
