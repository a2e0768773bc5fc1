#include "tinf/loop_space.hpp"

#include <iomanip>
#include <ostream>

namespace tinf {

namespace {

std::size_t chart_dim(int level, std::size_t n) { return (std::size_t{1} << level) * n; }

}  // namespace

LoopPoint::LoopPoint(std::vector<TangentElement> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 3) throw DimensionError("a loop needs at least 3 samples");
  for (const TangentElement& s : samples_) {
    if (s.order() != samples_.front().order() || s.base_dim() != samples_.front().base_dim()) {
      throw DimensionError("loop samples must share order and base dimension");
    }
  }
}

const TangentElement& LoopPoint::operator[](std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(samples_.size());
  return samples_[static_cast<std::size_t>(((i % n) + n) % n)];
}

LoopOperator LoopOperator::from_map(SmoothMap f) {
  return LoopOperator([f](const TangentElement& xi) { return push_forward(f, xi); }, "map");
}

LoopOperator LoopOperator::kappa() {
  return LoopOperator([](const TangentElement& xi) { return tinf::kappa(xi); }, "kappa");
}

LoopOperator LoopOperator::fiber_of(VectorField v) {
  std::string name = v.name();
  return LoopOperator([v = std::move(v)](const TangentElement& xi) { return v.fiber(xi); }, std::move(name));
}

LoopOperator LoopOperator::identity() {
  return LoopOperator([](const TangentElement& xi) { return xi; }, "identity");
}

LoopOperator LoopOperator::then(const LoopOperator& next) const {
  return LoopOperator([a = fn_, b = next.fn_](const TangentElement& xi) { return b(a(xi)); },
                      next.name_ + " o " + name_);
}

LoopPoint pointwise_apply(const LoopOperator& op, const LoopPoint& c) {
  std::vector<TangentElement> out;
  out.reserve(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    try {
      out.push_back(op(c.samples()[j]));
    } catch (const SampleError&) {
      throw;
    } catch (const Error& e) {
      throw SampleError(e.what(), j);
    }
  }
  return LoopPoint(std::move(out));
}

TangentElement to_product(const LoopPoint& c) {
  const std::size_t n = static_cast<std::size_t>(c.base_dim());
  const std::size_t big = c.size() * n;
  TangentElement e(c.order(), static_cast<int>(big));
  for (std::size_t s = 0; s < e.block_count(); ++s) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto src = c.samples()[j].block(s);
      std::copy(src.begin(), src.end(), e.block(s).begin() + static_cast<std::ptrdiff_t>(j * n));
    }
  }
  return e;
}

LoopPoint from_product(const TangentElement& e, int base_dim) {
  const std::size_t n = static_cast<std::size_t>(base_dim);
  if (base_dim < 1 || e.base_dim() % base_dim != 0) throw DimensionError("product dimension is not a multiple");
  const std::size_t count = static_cast<std::size_t>(e.base_dim()) / n;
  std::vector<TangentElement> samples(count, TangentElement(e.order(), base_dim));
  for (std::size_t s = 0; s < e.block_count(); ++s) {
    const auto blk = e.block(s);
    for (std::size_t j = 0; j < count; ++j) {
      std::copy(blk.begin() + static_cast<std::ptrdiff_t>(j * n), blk.begin() + static_cast<std::ptrdiff_t>((j + 1) * n),
                samples[j].block(s).begin());
    }
  }
  return LoopPoint(std::move(samples));
}

Semispray pointwise_spray(const Semispray& s, std::size_t samples) {
  const std::size_t n = static_cast<std::size_t>(s.base_dim());
  const std::size_t big = samples * n;
  const std::size_t in_blocks = std::size_t{1} << s.level();
  const std::size_t out_blocks = in_blocks / 2;
  std::vector<SmoothMap> parts;
  for (std::size_t j = 0; j < samples; ++j) {
    std::vector<int> idx;
    for (std::size_t b = 0; b < in_blocks; ++b)
      for (std::size_t c = 0; c < n; ++c) idx.push_back(static_cast<int>(b * big + j * n + c));
    parts.push_back(compose(s.coefficient(), select(chart_dim(s.level(), big), std::move(idx))));
  }
  // concat is sample-major; the product layout is block-major.
  const std::size_t per = out_blocks * n;
  std::vector<int> reorder;
  for (std::size_t b = 0; b < out_blocks; ++b)
    for (std::size_t j = 0; j < samples; ++j)
      for (std::size_t c = 0; c < n; ++c) reorder.push_back(static_cast<int>(j * per + b * n + c));
  SmoothMap g = compose(select(samples * per, std::move(reorder)), concat(parts));
  return Semispray(s.level(), static_cast<int>(big), std::move(g), "H1(" + s.name() + ")", s.flags());
}

CheckReport loop_lift_commutes(const Semispray& s, const LoopPoint& c, double tol) {
  if (c.order() != s.level() + 1 || c.base_dim() != s.base_dim()) {
    throw DimensionError("loop_lift_commutes: samples must be order " + std::to_string(s.level() + 1) +
                         " elements over R^" + std::to_string(s.base_dim()));
  }
  CheckReport rep{"loop_lift_commutes", 0.0, tol, static_cast<int>(c.size())};
  const VectorField lhs_field = semispray_to_field(complete_lift_spray(pointwise_spray(s, c.size())));
  const LoopPoint lhs = from_product(lhs_field.fiber(to_product(c)), s.base_dim());
  const LoopPoint rhs = pointwise_apply(LoopOperator::fiber_of(semispray_to_field(complete_lift_spray(s))), c);
  for (std::size_t j = 0; j < c.size(); ++j) rep.record(max_abs_diff(lhs.samples()[j], rhs.samples()[j]));
  return rep;
}

LoopTrajectory loop_geodesic(const Semispray& s, const LoopPoint& c0, const LoopPoint& v0, const FlowSpec& spec) {
  if (c0.size() != v0.size()) throw DimensionError("loop_geodesic: position and velocity loops differ in length");
  const Semispray h = pointwise_spray(s, c0.size());
  const Trajectory t = integrate_geodesic(h, to_product(c0), to_product(v0), spec);
  LoopTrajectory out;
  out.times = t.times;
  out.dt = t.dt;
  out.name = h.name();
  out.states.reserve(t.states.size());
  for (const TangentElement& st : t.states) {
    // st is (X, Y) over R^(N n); split into per-sample (x_j, y_j).
    const LoopPoint x = from_product(st.base(), s.base_dim());
    const LoopPoint y = from_product(st.fiber(), s.base_dim());
    std::vector<TangentElement> pairs;
    pairs.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) pairs.push_back(join(x.samples()[j], y.samples()[j]));
    out.states.emplace_back(std::move(pairs));
  }
  return out;
}

void write_csv(std::ostream& out, const LoopTrajectory& traj) {
  if (traj.states.empty()) return;
  out << csv_header(traj.states.front().order(), traj.states.front().base_dim(), true) << '\n';
  out << std::setprecision(17);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    for (std::size_t j = 0; j < traj.states[k].size(); ++j) {
      out << traj.times[k] << ',' << j;
      for (double v : traj.states[k].samples()[j].flat()) out << ',' << v;
      out << '\n';
    }
  }
}

}  // namespace tinf
