#include "tinf/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tinf/errors.hpp"

namespace tinf {

struct Expr::Node {
  Op op;
  double value = 0.0;
  std::size_t index = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  std::size_t arity = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

template <class Scalar>
Scalar evaluate(const Expr::Node& n, std::span<const Scalar> in) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::constant:
      return Scalar(n.value);
    case Op::variable:
      if (n.index >= in.size()) {
        throw DimensionError("expression references x" + std::to_string(n.index) + " but only " +
                             std::to_string(in.size()) + " inputs were given");
      }
      return in[n.index];
    case Op::neg:
      return -evaluate(*n.lhs, in);
    case Op::add:
      return evaluate(*n.lhs, in) + evaluate(*n.rhs, in);
    case Op::sub:
      return evaluate(*n.lhs, in) - evaluate(*n.rhs, in);
    case Op::mul:
      return evaluate(*n.lhs, in) * evaluate(*n.rhs, in);
    case Op::div:
      return evaluate(*n.lhs, in) / evaluate(*n.rhs, in);
    case Op::pow:
      if (n.rhs->op == Op::constant) return pow(evaluate(*n.lhs, in), n.rhs->value);
      return pow(evaluate(*n.lhs, in), evaluate(*n.rhs, in));
    case Op::sin:
      return sin(evaluate(*n.lhs, in));
    case Op::cos:
      return cos(evaluate(*n.lhs, in));
    case Op::exp:
      return exp(evaluate(*n.lhs, in));
    case Op::log:
      return log(evaluate(*n.lhs, in));
    case Op::sqrt:
      return sqrt(evaluate(*n.lhs, in));
  }
  return Scalar(0.0);
}

const char* function_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::sin: return "sin";
    case Expr::Op::cos: return "cos";
    case Expr::Op::exp: return "exp";
    case Expr::Op::log: return "log";
    case Expr::Op::sqrt: return "sqrt";
    default: return "?";
  }
}

void print(std::ostream& os, const Expr::Node& n) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::constant: {
      std::ostringstream v;
      v.precision(17);
      v << n.value;
      if (n.value < 0) os << '(' << v.str() << ')';
      else os << v.str();
      return;
    }
    case Op::variable:
      os << 'x' << n.index;
      return;
    case Op::neg:
      os << "(-";
      print(os, *n.lhs);
      os << ')';
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow: {
      const char sym = n.op == Op::add ? '+' : n.op == Op::sub ? '-' : n.op == Op::mul ? '*' : n.op == Op::div ? '/' : '^';
      os << '(';
      print(os, *n.lhs);
      os << ' ' << sym << ' ';
      print(os, *n.rhs);
      os << ')';
      return;
    }
    default:
      os << function_name(n.op) << '(';
      print(os, *n.lhs);
      os << ')';
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Expr::Op::add, lhs, term());
      else if (accept('-')) lhs = make(Expr::Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Expr::Op::mul, lhs, unary());
      else if (accept('/')) lhs = make(Expr::Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Expr::Op::neg, unary(), nullptr);
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Expr::Op::pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view word = s_.substr(start, pos_ - start);
      if (word.size() > 1 && word[0] == 'x' &&
          word.find_first_not_of("0123456789", 1) == std::string_view::npos) {
        std::size_t index = 0;
        std::from_chars(word.data() + 1, word.data() + word.size(), index);
        auto n = std::make_shared<Expr::Node>();
        n->op = Expr::Op::variable;
        n->index = index;
        n->arity = index + 1;
        return n;
      }
      Expr::Op op;
      if (word == "sin") op = Expr::Op::sin;
      else if (word == "cos") op = Expr::Op::cos;
      else if (word == "exp") op = Expr::Op::exp;
      else if (word == "log") op = Expr::Op::log;
      else if (word == "sqrt") op = Expr::Op::sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(word) + "'");
      }
      expect('(');
      NodePtr arg = expr();
      expect(')');
      return make(op, arg, nullptr);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    // std::from_chars for double is missing from older libstdc++.
    const std::string token(s_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    auto n = std::make_shared<Expr::Node>();
    n->op = Expr::Op::constant;
    n->value = v;
    return n;
  }

  static NodePtr make(Expr::Op op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->arity = std::max(lhs->arity, rhs ? rhs->arity : 0);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = value;
  node_ = std::move(n);
}

Expr Expr::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->index = index;
  n->arity = index + 1;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Op Expr::op() const noexcept { return node_->op; }
std::size_t Expr::arity() const noexcept { return node_->arity; }

double Expr::constant_value() const {
  if (!is_constant()) throw Error("expression is not a constant");
  return node_->value;
}

Jet Expr::eval(std::span<const Jet> inputs) const { return evaluate<Jet>(*node_, inputs); }

double Expr::eval(std::span<const double> inputs) const {
  std::vector<Jet> jets(inputs.begin(), inputs.end());
  return evaluate<Jet>(*node_, std::span<const Jet>(jets)).value();
}

std::string Expr::to_string() const {
  std::ostringstream os;
  print(os, *node_);
  return os.str();
}

Expr Expr::unary(Op op, const Expr& a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = a.node_;
  n->arity = a.arity();
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::binary(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = a.node_;
  n->rhs = b.node_;
  n->arity = std::max(a.arity(), b.arity());
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr operator-(const Expr& a) { return Expr::unary(Expr::Op::neg, a); }
Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::div, a, b); }
Expr pow(const Expr& a, const Expr& b) { return Expr::binary(Expr::Op::pow, a, b); }
Expr sin(const Expr& a) { return Expr::unary(Expr::Op::sin, a); }
Expr cos(const Expr& a) { return Expr::unary(Expr::Op::cos, a); }
Expr exp(const Expr& a) { return Expr::unary(Expr::Op::exp, a); }
Expr log(const Expr& a) { return Expr::unary(Expr::Op::log, a); }
Expr sqrt(const Expr& a) { return Expr::unary(Expr::Op::sqrt, a); }

Expr parse_expression(std::string_view text) {
  Parser p(text);
  return Expr(p.parse());
}

}  // namespace tinf
