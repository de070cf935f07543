// Copyright 2026 The lagcrit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lagcrit/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <utility>

namespace lagcrit {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& message)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      kind_(kind),
      offset_(offset) {}

DomainError::DomainError(std::size_t node, std::string subexpression, const std::string& message)
    : std::runtime_error(message + " in " + subexpression),
      node_(node),
      subexpression_(std::move(subexpression)) {}

namespace {

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr std::array<FunctionName, 5> kFunctions{{
    {"sin", Op::kSin},
    {"cos", Op::kCos},
    {"exp", Op::kExp},
    {"ln", Op::kLn},
    {"sqrt", Op::kSqrt},
}};

std::optional<Op> function_op(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return f.op;
  return std::nullopt;
}

std::string_view function_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "?";
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Recursive-descent parser producing a post-ordered node list.
class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  std::vector<Node> run() {
    skip_space();
    if (pos_ >= text_.size()) fail(ParseError::Kind::kSyntax, "empty expression");
    parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail(ParseError::Kind::kSyntax, "unexpected character");
    return std::move(nodes_);
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, const std::string& message) const {
    throw ParseError(kind, pos_, message);
  }
  [[noreturn]] void fail_at(ParseError::Kind kind, std::size_t at, const std::string& message) const {
    throw ParseError(kind, at, message);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::int32_t push(Node n) {
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t binary(Op op, std::int32_t l, std::int32_t r) {
    return push(Node{.op = op, .lhs = l, .rhs = r});
  }

  std::int32_t parse_sum() {
    std::int32_t lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::kAdd, lhs, parse_product());
      } else if (accept('-')) {
        lhs = binary(Op::kSub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t parse_product() {
    std::int32_t lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Op::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Op::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t parse_unary() {
    if (accept('-')) {
      const std::int32_t operand = parse_unary();
      return push(Node{.op = Op::kNeg, .lhs = operand});
    }
    return parse_power();
  }

  // power := primary ('^' exponent)?, exponent := '-'* power (right-assoc).
  std::int32_t parse_power() {
    const std::int32_t base = parse_primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t exponent_at = pos_;
    const std::size_t first = nodes_.size();
    parse_unary();
    const std::optional<double> exponent = fold_constant(first);
    if (!exponent) fail_at(ParseError::Kind::kNonConstantExponent, exponent_at, "non-constant exponent");
    nodes_.resize(first);
    return push(Node{.op = Op::kPow, .value = *exponent, .lhs = base});
  }

  // Evaluates nodes_[first..] when they reference no variable.
  std::optional<double> fold_constant(std::size_t first) const {
    std::vector<double> values(nodes_.size(), 0.0);
    for (std::size_t i = first; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      const double a = n.lhs >= 0 ? values[n.lhs] : 0.0;
      const double b = n.rhs >= 0 ? values[n.rhs] : 0.0;
      switch (n.op) {
        case Op::kConstant: values[i] = n.value; break;
        case Op::kVariable: return std::nullopt;
        case Op::kAdd: values[i] = a + b; break;
        case Op::kSub: values[i] = a - b; break;
        case Op::kMul: values[i] = a * b; break;
        case Op::kDiv: values[i] = a / b; break;
        case Op::kPow: values[i] = std::pow(a, n.value); break;
        case Op::kNeg: values[i] = -a; break;
        case Op::kSin: values[i] = std::sin(a); break;
        case Op::kCos: values[i] = std::cos(a); break;
        case Op::kExp: values[i] = std::exp(a); break;
        case Op::kLn: values[i] = std::log(a); break;
        case Op::kSqrt: values[i] = std::sqrt(a); break;
      }
    }
    const double v = values.back();
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  }

  std::int32_t parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(ParseError::Kind::kSyntax, "unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const std::int32_t inner = parse_sum();
      if (!accept(')')) fail(ParseError::Kind::kSyntax, "expected ')'");
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    fail(ParseError::Kind::kSyntax, std::string("unexpected '") + c + "'");
  }

  std::int32_t parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (is_digit(text_[pos_]) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
      fail_at(ParseError::Kind::kSyntax, start, "malformed number");
    return push(Node{.op = Op::kConstant, .value = value});
  }

  std::int32_t parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (const auto op = function_op(name)) {
      if (!accept('(')) fail(ParseError::Kind::kSyntax, "expected '(' after function name");
      const std::int32_t arg = parse_sum();
      if (!accept(')')) fail(ParseError::Kind::kSyntax, "expected ')'");
      return push(Node{.op = *op, .lhs = arg});
    }
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return push(Node{.op = Op::kVariable, .var = i});
    fail_at(ParseError::Kind::kUnknownIdentifier, start,
            "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace

bool is_identifier(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front())) return false;
  if (!std::all_of(name.begin(), name.end(), is_ident_char)) return false;
  return !function_op(name).has_value();
}

Expression parse(std::string_view text, std::span<const std::string> variables) {
  std::set<std::string_view> seen;
  for (const auto& name : variables) {
    if (!is_identifier(name))
      throw ParseError(ParseError::Kind::kInvalidVariables, 0, "invalid variable name '" + name + "'");
    if (!seen.insert(name).second)
      throw ParseError(ParseError::Kind::kInvalidVariables, 0, "duplicate variable name '" + name + "'");
  }
  Expression e;
  e.nodes_ = std::make_shared<const std::vector<Node>>(Parser(text, variables).run());
  e.names_ = std::make_shared<const std::vector<std::string>>(variables.begin(), variables.end());
  return e;
}

Expression parse(std::string_view text, std::initializer_list<std::string> variables) {
  return parse(text, std::span<const std::string>(variables.begin(), variables.size()));
}

const std::vector<std::string>& Expression::variables() const {
  static const std::vector<std::string> kEmpty;
  return names_ ? *names_ : kEmpty;
}

std::span<const Node> Expression::nodes() const {
  if (!nodes_) return {};
  return *nodes_;
}

std::size_t Expression::root() const {
  if (!nodes_ || nodes_->empty()) throw std::logic_error("Expression: empty");
  return nodes_->size() - 1;
}

bool Expression::is_constant() const {
  return std::none_of(nodes().begin(), nodes().end(),
                      [](const Node& n) { return n.op == Op::kVariable; });
}

std::string Expression::serialize_node(std::size_t index) const {
  const Node& n = nodes()[index];
  auto sub = [&](std::int32_t child) { return serialize_node(static_cast<std::size_t>(child)); };
  switch (n.op) {
    case Op::kConstant: return format_number(n.value);
    case Op::kVariable: return (*names_)[n.var];
    case Op::kAdd: return "(" + sub(n.lhs) + "+" + sub(n.rhs) + ")";
    case Op::kSub: return "(" + sub(n.lhs) + "-" + sub(n.rhs) + ")";
    case Op::kMul: return "(" + sub(n.lhs) + "*" + sub(n.rhs) + ")";
    case Op::kDiv: return "(" + sub(n.lhs) + "/" + sub(n.rhs) + ")";
    case Op::kPow: {
      const std::string exponent = n.value < 0 || std::signbit(n.value)
                                       ? "(-" + format_number(-n.value) + ")"
                                       : format_number(n.value);
      return "(" + sub(n.lhs) + "^" + exponent + ")";
    }
    case Op::kNeg: return "(-" + sub(n.lhs) + ")";
    default: return std::string(function_name(n.op)) + "(" + sub(n.lhs) + ")";
  }
}

std::string Expression::serialize() const { return serialize_node(root()); }

bool operator==(const Expression& a, const Expression& b) {
  if (a.variables() != b.variables()) return false;
  const auto na = a.nodes();
  const auto nb = b.nodes();
  return std::equal(na.begin(), na.end(), nb.begin(), nb.end());
}

// ---------------------------------------------------------------------------
// Forward-mode evaluation.
//
// Every unary operation (functions, constant powers, reciprocals) is lifted
// through its Taylor coefficients (f, f', f'') at the operand value, so the
// three scalar types below share one set of propagation rules.

namespace {

struct Taylor {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Value and first/second derivative of t -> t^c. Coefficients that are
// multiplied by zero are skipped so t = 0 stays finite for c in {1, 2}.
Taylor power_taylor(double t, double c) {
  Taylor r;
  r.f = std::pow(t, c);
  r.d1 = c == 0.0 ? 0.0 : (c == 1.0 ? 1.0 : c * std::pow(t, c - 1.0));
  r.d2 = (c == 0.0 || c == 1.0) ? 0.0 : (c == 2.0 ? 2.0 : c * (c - 1.0) * std::pow(t, c - 2.0));
  return r;
}

class Sweep {
 public:
  explicit Sweep(const Expression& e) : e_(e) {}

  [[noreturn]] void domain(std::size_t node, const std::string& what) const {
    throw DomainError(node, e_.serialize_node(node), what);
  }

  // Taylor coefficients for a unary node applied to operand value t.
  // `order` is the highest derivative the caller will use.
  Taylor unary(std::size_t node, Op op, double t, double exponent, int order) const {
    Taylor r;
    switch (op) {
      case Op::kNeg: r = {-t, -1.0, 0.0}; break;
      case Op::kSin: r = {std::sin(t), std::cos(t), -std::sin(t)}; break;
      case Op::kCos: r = {std::cos(t), -std::sin(t), -std::cos(t)}; break;
      case Op::kExp: {
        const double v = std::exp(t);
        r = {v, v, v};
        break;
      }
      case Op::kLn:
        if (!(t > 0.0)) domain(node, "ln of non-positive argument");
        r = {std::log(t), 1.0 / t, -1.0 / (t * t)};
        break;
      case Op::kSqrt: {
        if (t < 0.0) domain(node, "sqrt of negative argument");
        if (t == 0.0 && order > 0) domain(node, "sqrt is not differentiable at 0");
        const double v = std::sqrt(t);
        r = {v, order > 0 ? 0.5 / v : 0.0, order > 1 ? -0.25 / (v * t) : 0.0};
        break;
      }
      case Op::kPow: {
        if (t < 0.0 && exponent != std::floor(exponent))
          domain(node, "non-integer power of negative base");
        if (t == 0.0 && exponent < 0.0) domain(node, "negative power of zero");
        r = power_taylor(t, exponent);
        if (order < 2) r.d2 = 0.0;
        if (order < 1) r.d1 = 0.0;
        break;
      }
      case Op::kDiv:  // reciprocal of the denominator
        if (t == 0.0) domain(node, "division by zero");
        r = {1.0 / t, -1.0 / (t * t), 2.0 / (t * t * t)};
        break;
      default: throw std::logic_error("unary: unexpected op");
    }
    if (!std::isfinite(r.f) || (order > 0 && !std::isfinite(r.d1)) ||
        (order > 1 && !std::isfinite(r.d2)))
      domain(node, "non-finite result");
    return r;
  }

 private:
  const Expression& e_;
};

// --- value only ------------------------------------------------------------

double run_value(const Expression& e, std::span<const double> x) {
  const Sweep sweep(e);
  const auto nodes = e.nodes();
  std::vector<double> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    switch (n.op) {
      case Op::kConstant: v[i] = n.value; break;
      case Op::kVariable: v[i] = x[n.var]; break;
      case Op::kAdd: v[i] = v[n.lhs] + v[n.rhs]; break;
      case Op::kSub: v[i] = v[n.lhs] - v[n.rhs]; break;
      case Op::kMul: v[i] = v[n.lhs] * v[n.rhs]; break;
      case Op::kDiv:
        if (v[n.rhs] == 0.0) sweep.domain(i, "division by zero");
        v[i] = v[n.lhs] / v[n.rhs];
        break;
      default: v[i] = sweep.unary(i, n.op, v[n.lhs], n.value, 0).f; break;
    }
    if (!std::isfinite(v[i])) sweep.domain(i, "non-finite result");
  }
  return v.back();
}

// --- second order ----------------------------------------------------------
//
// Jet = value, gradient, and the upper triangle of the Hessian. Only the
// upper triangle is propagated; mirroring at the end makes the returned
// Hessian bit-for-bit symmetric.

struct Jet {
  double v = 0.0;
  Vector g;
  Vector h;  // packed upper triangle, row-major: (i, j) with i <= j
};

class JetOps {
 public:
  JetOps(std::size_t n, bool with_hessian) : n_(n), hess_(with_hessian) {}

  std::size_t packed() const { return hess_ ? n_ * (n_ + 1) / 2 : 0; }

  Jet constant(double c) const { return Jet{c, Vector(n_, 0.0), Vector(packed(), 0.0)}; }
  Jet variable(double value, std::size_t k) const {
    Jet j = constant(value);
    j.g[k] = 1.0;
    return j;
  }

  Jet add(const Jet& a, const Jet& b, double sign) const {
    Jet r{a.v + sign * b.v, a.g, a.h};
    for (std::size_t i = 0; i < n_; ++i) r.g[i] += sign * b.g[i];
    for (std::size_t i = 0; i < r.h.size(); ++i) r.h[i] += sign * b.h[i];
    return r;
  }

  Jet mul(const Jet& a, const Jet& b) const {
    Jet r{a.v * b.v, Vector(n_), Vector(packed())};
    for (std::size_t i = 0; i < n_; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    if (hess_) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j, ++k)
          r.h[k] = a.h[k] * b.v + a.v * b.h[k] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    }
    return r;
  }

  Jet chain(const Jet& a, const Taylor& t) const {
    Jet r{t.f, Vector(n_), Vector(packed())};
    for (std::size_t i = 0; i < n_; ++i) r.g[i] = t.d1 * a.g[i];
    if (hess_) {
      std::size_t k = 0;
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j, ++k)
          r.h[k] = t.d1 * a.h[k] + t.d2 * a.g[i] * a.g[j];
    }
    return r;
  }

 private:
  std::size_t n_;
  bool hess_;
};

Jet run_jet(const Expression& e, std::span<const double> x, bool with_hessian) {
  const Sweep sweep(e);
  const JetOps ops(x.size(), with_hessian);
  const int order = with_hessian ? 2 : 1;
  const auto nodes = e.nodes();
  std::vector<Jet> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    switch (n.op) {
      case Op::kConstant: v[i] = ops.constant(n.value); break;
      case Op::kVariable: v[i] = ops.variable(x[n.var], n.var); break;
      case Op::kAdd: v[i] = ops.add(v[n.lhs], v[n.rhs], 1.0); break;
      case Op::kSub: v[i] = ops.add(v[n.lhs], v[n.rhs], -1.0); break;
      case Op::kMul: v[i] = ops.mul(v[n.lhs], v[n.rhs]); break;
      case Op::kDiv: {
        const Jet recip = ops.chain(v[n.rhs], sweep.unary(i, Op::kDiv, v[n.rhs].v, 0.0, order));
        v[i] = ops.mul(v[n.lhs], recip);
        v[i].v = v[n.lhs].v / v[n.rhs].v;  // same rounding as evaluate()
        break;
      }
      default: v[i] = ops.chain(v[n.lhs], sweep.unary(i, n.op, v[n.lhs].v, n.value, order)); break;
    }
    const Jet& r = v[i];
    bool finite = std::isfinite(r.v);
    for (double d : r.g) finite = finite && std::isfinite(d);
    for (double d : r.h) finite = finite && std::isfinite(d);
    if (!finite) sweep.domain(i, "non-finite result");
  }
  return std::move(v.back());
}

void check_arity(const Expression& e, std::span<const double> x) {
  if (x.size() != e.arity())
    throw std::invalid_argument("point has " + std::to_string(x.size()) +
                                " coordinates, expression expects " + std::to_string(e.arity()));
}

Matrix unpack(const Vector& packed, std::size_t n) {
  Matrix h(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++k) h(i, j) = h(j, i) = packed[k];
  return h;
}

}  // namespace

double evaluate(const Expression& e, std::span<const double> x) {
  check_arity(e, x);
  return run_value(e, x);
}

Vector gradient(const Expression& e, std::span<const double> x) {
  check_arity(e, x);
  return run_jet(e, x, false).g;
}

Matrix hessian(const Expression& e, std::span<const double> x) {
  return second_order(e, x).hessian;
}

SecondOrder second_order(const Expression& e, std::span<const double> x) {
  check_arity(e, x);
  Jet j = run_jet(e, x, true);
  return SecondOrder{j.v, std::move(j.g), unpack(j.h, x.size())};
}

// ---------------------------------------------------------------------------
// Finite-difference oracles.

namespace {

Vector fd_gradient_steps(const Expression& e, std::span<const double> x, const Vector& steps) {
  Vector probe(x.begin(), x.end());
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = steps[i];
    probe[i] = x[i] + h;
    const double up = evaluate(e, probe);
    probe[i] = x[i] - h;
    const double down = evaluate(e, probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Matrix fd_hessian_steps(const Expression& e, std::span<const double> x, const Vector& steps) {
  const std::size_t n = x.size();
  Vector probe(x.begin(), x.end());
  const double centre = evaluate(e, x);
  Matrix h(n, n);
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    probe[i] += di;
    probe[j] += dj;
    const double v = evaluate(e, probe);
    probe[i] = x[i];
    probe[j] = x[j];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double hi = steps[i];
    h(i, i) = (at(i, hi, i, 0.0) - 2.0 * centre + at(i, -hi, i, 0.0)) / (hi * hi);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double hj = steps[j];
      const double v = (at(i, hi, j, hj) - at(i, hi, j, -hj) - at(i, -hi, j, hj) + at(i, -hi, j, -hj)) /
                       (4.0 * hi * hj);
      h(i, j) = h(j, i) = v;
    }
  }
  return h;
}

Vector scaled_steps(std::span<const double> x, double base) {
  Vector s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = base * (1.0 + std::abs(x[i]));
  return s;
}

}  // namespace

Vector fd_gradient(const Expression& e, std::span<const double> x) {
  check_arity(e, x);
  return fd_gradient_steps(e, x, scaled_steps(x, std::cbrt(std::numeric_limits<double>::epsilon())));
}

Vector fd_gradient(const Expression& e, std::span<const double> x, double h) {
  check_arity(e, x);
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  return fd_gradient_steps(e, x, Vector(x.size(), h));
}

Matrix fd_hessian(const Expression& e, std::span<const double> x) {
  check_arity(e, x);
  return fd_hessian_steps(e, x,
                          scaled_steps(x, std::pow(std::numeric_limits<double>::epsilon(), 0.25)));
}

Matrix fd_hessian(const Expression& e, std::span<const double> x, double h) {
  check_arity(e, x);
  if (!(h > 0.0)) throw std::invalid_argument("fd_hessian: step must be positive");
  return fd_hessian_steps(e, x, Vector(x.size(), h));
}

}  // namespace lagcrit
