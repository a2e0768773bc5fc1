#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tinf/expression.hpp"
#include "tinf/jet.hpp"

namespace tinf {

/// Program node behind a SmoothMap. Implementations must be immutable.
class MapProgram {
 public:
  virtual ~MapProgram() = default;
  virtual std::size_t in_dim() const = 0;
  virtual std::size_t out_dim() const = 0;
  /// `in.size() == in_dim()` is checked by the caller.
  virtual std::vector<Jet> eval(std::span<const Jet> in) const = 0;
};

/// Smooth map R^in_dim -> R^out_dim given as a program over an abstract
/// scalar. Evaluates on reals or on jets; on depth-k jets it yields the
/// k-fold tangent map exactly. Cheap to copy (shared immutable program).
class SmoothMap {
 public:
  explicit SmoothMap(std::shared_ptr<const MapProgram> program);

  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }

  std::vector<double> operator()(std::span<const double> x) const;
  std::vector<Jet> operator()(std::span<const Jet> x) const;

  const MapProgram& program() const noexcept { return *program_; }

 private:
  std::shared_ptr<const MapProgram> program_;
  std::size_t in_dim_;
  std::size_t out_dim_;
};

/// One expression per output coordinate over inputs x0..x{in_dim-1}.
SmoothMap from_expressions(std::size_t in_dim, std::vector<Expr> outputs);
/// Parses one expression per output. Throws ParseError, or DimensionError
/// when an expression references an input beyond `in_dim`.
SmoothMap parse_map(std::size_t in_dim, const std::vector<std::string>& outputs);

/// out[i] = in[indices[i]], or 0 where indices[i] < 0.
SmoothMap select(std::size_t in_dim, std::vector<int> indices);
SmoothMap identity(std::size_t dim);
SmoothMap zero(std::size_t in_dim, std::size_t out_dim);
SmoothMap scale(double factor, const SmoothMap& f);
/// outer(inner(x)).
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);
/// Stacks the outputs of maps sharing one input.
SmoothMap concat(const std::vector<SmoothMap>& parts);
/// Tangent functor applied once: (x, v) -> (f(x), df(x) v), inputs and
/// outputs laid out as [base half, fiber half].
SmoothMap tangent(const SmoothMap& f);

}  // namespace tinf
