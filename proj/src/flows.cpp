#include "tinf/flows.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace tinf {

namespace {

double magnitude(double v) { return std::abs(v); }

double magnitude(const Jet& v) {
  double m = 0.0;
  for (double c : v.coefficients()) m = std::max(m, std::abs(c));
  return m;
}

template <class T>
std::vector<T> rk4(const SmoothMap& f, std::span<const T> y, double h) {
  const std::size_t n = y.size();
  const double half = 0.5 * h;
  const std::vector<T> k1 = f(y);
  std::vector<T> tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + half * k1[i];
  const std::vector<T> k2 = f(std::span<const T>(tmp));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + half * k2[i];
  const std::vector<T> k3 = f(std::span<const T>(tmp));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  const std::vector<T> k4 = f(std::span<const T>(tmp));
  const double sixth = h / 6.0;
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

template <class T>
struct Run {
  std::vector<std::vector<T>> stored;
  std::vector<double> times;
  std::vector<T> last;
  double last_time = 0.0;
  std::string failure;
};

template <class T>
Run<T> run(const SmoothMap& rhs, std::vector<T> y, const FlowSpec& spec, bool store) {
  spec.validate();
  if (rhs.in_dim() != y.size() || rhs.out_dim() != y.size()) throw DimensionError("flow: state and field sizes differ");
  const std::int64_t steps = spec.steps();
  const double h = spec.step();
  Run<T> r;
  r.last_time = spec.t0;
  if (store) {
    r.stored.push_back(y);
    r.times.push_back(spec.t0);
  }
  for (std::int64_t k = 0; k < steps; ++k) {
    std::vector<T> next;
    try {
      next = rk4<T>(rhs, std::span<const T>(y), h);
    } catch (const EvaluationError& e) {
      r.failure = e.what();
      break;
    }
    double m = 0.0;
    for (const T& v : next) m = std::max(m, magnitude(v));
    if (!std::isfinite(m)) {
      r.failure = "state became non-finite";
      break;
    }
    if (m > spec.blowup_bound) {
      r.failure = "state norm exceeded the blow-up bound";
      break;
    }
    y = std::move(next);
    r.last_time = k + 1 == steps ? spec.t1 : spec.t0 + static_cast<double>(k + 1) * h;
    if (store && ((k + 1) % spec.thin == 0 || k + 1 == steps)) {
      r.stored.push_back(y);
      r.times.push_back(r.last_time);
    }
  }
  r.last = std::move(y);
  return r;
}

Trajectory to_trajectory(const Run<double>& r, int order, int n, double dt, std::string name) {
  Trajectory t;
  t.level = order;
  t.base_dim = n;
  t.dt = dt;
  t.name = std::move(name);
  t.times = r.times;
  t.states.reserve(r.stored.size());
  for (const auto& s : r.stored) t.states.emplace_back(order, n, s);
  return t;
}

}  // namespace

void FlowSpec::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("flow: dt must be positive");
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) throw ConfigError("flow: need t1 > t0");
  if (thin < 1) throw ConfigError("flow: thinning factor must be at least 1");
  if (!(blowup_bound > 0.0)) throw ConfigError("flow: blow-up bound must be positive");
  const double n = std::ceil((t1 - t0) / dt - 1e-9);
  if (n > static_cast<double>(max_steps)) {
    throw ConfigError("flow: " + std::to_string(n) + " steps exceed the budget of " + std::to_string(max_steps));
  }
}

std::int64_t FlowSpec::steps() const {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((t1 - t0) / dt - 1e-9)));
}

double FlowSpec::step() const { return (t1 - t0) / static_cast<double>(steps()); }

std::vector<double> rk4_step(const SmoothMap& rhs, std::span<const double> y, double h) { return rk4<double>(rhs, y, h); }

std::vector<Jet> rk4_step(const SmoothMap& rhs, std::span<const Jet> y, double h) { return rk4<Jet>(rhs, y, h); }

Trajectory integrate_field(const VectorField& x, const TangentElement& xi0, const FlowSpec& spec) {
  if (xi0.order() != x.level() || xi0.base_dim() != x.base_dim()) {
    throw DimensionError("integrate_field: initial state does not match the field level");
  }
  const Run<double> r = run<double>(x.fiber_map(), xi0.values(), spec, true);
  Trajectory t = to_trajectory(r, x.level(), x.base_dim(), spec.step(), x.name());
  if (!r.failure.empty()) throw IntegrationError("integrate_field: " + r.failure, r.last_time, std::move(t));
  return t;
}

Trajectory integrate_geodesic(const Semispray& s, const TangentElement& x0, const TangentElement& v0,
                              const FlowSpec& spec) {
  if (x0.order() != s.level() - 1 || v0.order() != s.level() - 1 || x0.base_dim() != s.base_dim() ||
      v0.base_dim() != s.base_dim()) {
    throw DimensionError("integrate_geodesic: initial data must be order " + std::to_string(s.level() - 1) +
                         " elements over R^" + std::to_string(s.base_dim()));
  }
  return integrate_field(semispray_to_field(s), join(x0, v0), spec);
}

TangentElement flow_map_tangent(const VectorField& x, const TangentElement& xi, const FlowSpec& spec) {
  if (xi.order() != x.level() + 1 || xi.base_dim() != x.base_dim()) {
    throw DimensionError("flow_map_tangent: element must be one order above the field");
  }
  const TangentElement k = kappa(xi);
  const std::size_t m = x.dim();
  std::vector<Jet> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = Jet::from_coefficients({k.values()[i], k.values()[m + i]});
  const Run<Jet> r = run<Jet>(x.fiber_map(), std::move(y), spec, false);
  if (!r.failure.empty()) {
    Trajectory partial{x.level() + 1, x.base_dim(), spec.step(), x.name(), {}, {}};
    throw IntegrationError("flow_map_tangent: " + r.failure, r.last_time, std::move(partial));
  }
  std::vector<double> flat(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    flat[i] = r.last[i][0];
    flat[m + i] = r.last[i][1];
  }
  return kappa(TangentElement(xi.order(), xi.base_dim(), std::move(flat)));
}

double lifetime_probe(const VectorField& x, const TangentElement& xi0, const FlowSpec& spec) {
  if (xi0.order() != x.level() || xi0.base_dim() != x.base_dim()) {
    throw DimensionError("lifetime_probe: initial state does not match the field level");
  }
  return run<double>(x.fiber_map(), xi0.values(), spec, false).last_time;
}

std::string csv_header(int order, int base_dim, bool with_sample_index) {
  std::string h = "t";
  if (with_sample_index) h += ",sample_index";
  const std::size_t blocks = std::size_t{1} << order;
  for (std::size_t b = 0; b < blocks; ++b)
    for (int c = 0; c < base_dim; ++c) h += ",b" + std::to_string(b) + "_c" + std::to_string(c);
  return h;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << csv_header(traj.level, traj.base_dim) << '\n';
  out << std::setprecision(17);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << traj.times[k];
    for (double v : traj.states[k].flat()) out << ',' << v;
    out << '\n';
  }
}

nlohmann::json to_json(const Trajectory& traj) {
  nlohmann::json j;
  j["level"] = traj.level;
  j["base_dim"] = traj.base_dim;
  j["dt"] = traj.dt;
  j["name"] = traj.name;
  j["times"] = traj.times;
  nlohmann::json states = nlohmann::json::array();
  for (const TangentElement& s : traj.states) states.push_back(s.values());
  j["states"] = std::move(states);
  return j;
}

}  // namespace tinf
