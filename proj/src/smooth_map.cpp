#include "tinf/smooth_map.hpp"

#include <algorithm>
#include <numeric>

#include "tinf/errors.hpp"

namespace tinf {

namespace {

class ExpressionProgram final : public MapProgram {
 public:
  ExpressionProgram(std::size_t in_dim, std::vector<Expr> outputs) : in_dim_(in_dim), outputs_(std::move(outputs)) {
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      if (outputs_[i].arity() > in_dim_) {
        throw DimensionError("output " + std::to_string(i) + " references x" +
                             std::to_string(outputs_[i].arity() - 1) + " but the map has " +
                             std::to_string(in_dim_) + " inputs");
      }
    }
  }

  std::size_t in_dim() const override { return in_dim_; }
  std::size_t out_dim() const override { return outputs_.size(); }

  std::vector<Jet> eval(std::span<const Jet> in) const override {
    std::vector<Jet> out;
    out.reserve(outputs_.size());
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      try {
        out.push_back(outputs_[i].eval(in));
      } catch (const EvaluationError& e) {
        if (e.coordinate() >= 0) throw;
        throw EvaluationError(e.what(), static_cast<int>(i));
      }
    }
    return out;
  }

 private:
  std::size_t in_dim_;
  std::vector<Expr> outputs_;
};

class SelectProgram final : public MapProgram {
 public:
  SelectProgram(std::size_t in_dim, std::vector<int> indices) : in_dim_(in_dim), indices_(std::move(indices)) {
    for (int i : indices_) {
      if (i >= static_cast<int>(in_dim_)) throw DimensionError("select index " + std::to_string(i) + " out of range");
    }
  }

  std::size_t in_dim() const override { return in_dim_; }
  std::size_t out_dim() const override { return indices_.size(); }

  std::vector<Jet> eval(std::span<const Jet> in) const override {
    std::vector<Jet> out;
    out.reserve(indices_.size());
    for (int i : indices_) out.push_back(i < 0 ? Jet(0.0) : in[static_cast<std::size_t>(i)]);
    return out;
  }

 private:
  std::size_t in_dim_;
  std::vector<int> indices_;
};

class ScaleProgram final : public MapProgram {
 public:
  ScaleProgram(double factor, SmoothMap f) : factor_(factor), f_(std::move(f)) {}
  std::size_t in_dim() const override { return f_.in_dim(); }
  std::size_t out_dim() const override { return f_.out_dim(); }
  std::vector<Jet> eval(std::span<const Jet> in) const override {
    std::vector<Jet> out = f_(in);
    for (Jet& j : out) j *= factor_;
    return out;
  }

 private:
  double factor_;
  SmoothMap f_;
};

class ComposeProgram final : public MapProgram {
 public:
  ComposeProgram(SmoothMap outer, SmoothMap inner) : outer_(std::move(outer)), inner_(std::move(inner)) {
    if (outer_.in_dim() != inner_.out_dim()) {
      throw DimensionError("compose: outer expects " + std::to_string(outer_.in_dim()) + " inputs, inner yields " +
                           std::to_string(inner_.out_dim()));
    }
  }
  std::size_t in_dim() const override { return inner_.in_dim(); }
  std::size_t out_dim() const override { return outer_.out_dim(); }
  std::vector<Jet> eval(std::span<const Jet> in) const override {
    const std::vector<Jet> mid = inner_(in);
    return outer_(std::span<const Jet>(mid));
  }

 private:
  SmoothMap outer_;
  SmoothMap inner_;
};

class ConcatProgram final : public MapProgram {
 public:
  explicit ConcatProgram(std::vector<SmoothMap> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DimensionError("concat of no maps");
    for (const SmoothMap& p : parts_) {
      if (p.in_dim() != parts_.front().in_dim()) throw DimensionError("concat: input dimensions differ");
      out_dim_ += p.out_dim();
    }
  }
  std::size_t in_dim() const override { return parts_.front().in_dim(); }
  std::size_t out_dim() const override { return out_dim_; }
  std::vector<Jet> eval(std::span<const Jet> in) const override {
    std::vector<Jet> out;
    out.reserve(out_dim_);
    for (const SmoothMap& p : parts_) {
      std::vector<Jet> part = p(in);
      std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
  }

 private:
  std::vector<SmoothMap> parts_;
  std::size_t out_dim_ = 0;
};

// Seeds a fresh infinitesimal on the bit just above the deepest input.
class TangentProgram final : public MapProgram {
 public:
  explicit TangentProgram(SmoothMap f) : f_(std::move(f)) {}
  std::size_t in_dim() const override { return 2 * f_.in_dim(); }
  std::size_t out_dim() const override { return 2 * f_.out_dim(); }
  std::vector<Jet> eval(std::span<const Jet> in) const override {
    const std::size_t m = f_.in_dim();
    int d = 0;
    for (const Jet& j : in) d = std::max(d, j.depth());
    std::vector<Jet> seeded;
    seeded.reserve(m);
    for (std::size_t i = 0; i < m; ++i) seeded.push_back(Jet::join(in[i], in[m + i], d));
    const std::vector<Jet> image = f_(std::span<const Jet>(seeded));
    const std::size_t p = image.size();
    std::vector<Jet> out(2 * p);
    for (std::size_t i = 0; i < p; ++i) Jet::split(image[i], d + 1, out[i], out[p + i]);
    return out;
  }

 private:
  SmoothMap f_;
};

}  // namespace

SmoothMap::SmoothMap(std::shared_ptr<const MapProgram> program)
    : program_(std::move(program)), in_dim_(program_->in_dim()), out_dim_(program_->out_dim()) {}

std::vector<double> SmoothMap::operator()(std::span<const double> x) const {
  std::vector<Jet> in(x.begin(), x.end());
  const std::vector<Jet> out = (*this)(std::span<const Jet>(in));
  std::vector<double> values(out.size());
  std::transform(out.begin(), out.end(), values.begin(), [](const Jet& j) { return j.value(); });
  return values;
}

std::vector<Jet> SmoothMap::operator()(std::span<const Jet> x) const {
  if (x.size() != in_dim_) {
    throw DimensionError("map expects " + std::to_string(in_dim_) + " inputs, got " + std::to_string(x.size()));
  }
  return program_->eval(x);
}

SmoothMap from_expressions(std::size_t in_dim, std::vector<Expr> outputs) {
  return SmoothMap(std::make_shared<ExpressionProgram>(in_dim, std::move(outputs)));
}

SmoothMap parse_map(std::size_t in_dim, const std::vector<std::string>& outputs) {
  std::vector<Expr> exprs;
  exprs.reserve(outputs.size());
  for (const std::string& s : outputs) exprs.push_back(parse_expression(s));
  return from_expressions(in_dim, std::move(exprs));
}

SmoothMap select(std::size_t in_dim, std::vector<int> indices) {
  return SmoothMap(std::make_shared<SelectProgram>(in_dim, std::move(indices)));
}

SmoothMap identity(std::size_t dim) {
  std::vector<int> idx(dim);
  std::iota(idx.begin(), idx.end(), 0);
  return select(dim, std::move(idx));
}

SmoothMap zero(std::size_t in_dim, std::size_t out_dim) { return select(in_dim, std::vector<int>(out_dim, -1)); }

SmoothMap scale(double factor, const SmoothMap& f) { return SmoothMap(std::make_shared<ScaleProgram>(factor, f)); }

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  return SmoothMap(std::make_shared<ComposeProgram>(outer, inner));
}

SmoothMap concat(const std::vector<SmoothMap>& parts) { return SmoothMap(std::make_shared<ConcatProgram>(parts)); }

SmoothMap tangent(const SmoothMap& f) { return SmoothMap(std::make_shared<TangentProgram>(f)); }

}  // namespace tinf
