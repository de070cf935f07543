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

#ifndef LAGCRIT_EXPR_HPP_
#define LAGCRIT_EXPR_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lagcrit/dense.hpp"

namespace lagcrit {

/// Raised by parse() for malformed text. `offset` is the 0-based byte offset
/// of the offending token.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kUnknownIdentifier, kNonConstantExponent, kInvalidVariables };

  ParseError(Kind kind, std::size_t offset, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Raised when an expression is evaluated outside its natural domain
/// (division by zero, ln or sqrt of an invalid argument, non-finite result).
class DomainError : public std::runtime_error {
 public:
  DomainError(std::size_t node, std::string subexpression, const std::string& message);

  std::size_t node() const noexcept { return node_; }
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::size_t node_;
  std::string subexpression_;
};

enum class Op : std::uint8_t {
  kConstant,
  kVariable,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,  // `value` holds the constant exponent
  kNeg,
  kSin,
  kCos,
  kExp,
  kLn,
  kSqrt,
};

/// One node of a flattened expression tree. Children always precede their
/// parent, so a forward sweep over the node list evaluates the tree.
struct Node {
  Op op = Op::kConstant;
  double value = 0.0;       // constant value, or exponent for kPow
  std::size_t var = 0;      // variable index for kVariable
  std::int32_t lhs = -1;    // operand (unary) or left operand (binary)
  std::int32_t rhs = -1;    // right operand (binary)

  friend bool operator==(const Node&, const Node&) = default;
};

/// Immutable scalar formula over an ordered list of named variables.
///
/// Instances are created by parse() and are cheap to copy (the node list is
/// shared). All member functions are const and thread-safe.
class Expression {
 public:
  Expression() = default;

  /// Number of variables the expression may reference.
  std::size_t arity() const noexcept { return names_ ? names_->size() : 0; }
  const std::vector<std::string>& variables() const;
  std::span<const Node> nodes() const;
  std::size_t root() const;

  /// Canonical fully-parenthesized text; parse(serialize()) reproduces the
  /// same node list.
  std::string serialize() const;
  std::string serialize_node(std::size_t node) const;

  /// True when no variable occurs in the expression.
  bool is_constant() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  friend Expression parse(std::string_view, std::span<const std::string>);

  std::shared_ptr<const std::vector<Node>> nodes_;
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// Parses `text` with standard precedence: `^` binds tighter than unary
/// minus, which binds tighter than `*` `/`, then `+` `-`. Binary operators
/// are left-associative except `^`, whose exponent must be constant.
/// Recognized functions: sin cos exp ln sqrt.
Expression parse(std::string_view text, std::span<const std::string> variables);
Expression parse(std::string_view text, std::initializer_list<std::string> variables);

double evaluate(const Expression& e, std::span<const double> x);
Vector gradient(const Expression& e, std::span<const double> x);
Matrix hessian(const Expression& e, std::span<const double> x);

/// Value, gradient and Hessian from one second-order sweep.
struct SecondOrder {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};
SecondOrder second_order(const Expression& e, std::span<const double> x);

// Central-difference oracles. They only use evaluate() and are kept for
// validating the forward-mode derivatives.

/// Default per-coordinate step: cbrt(eps) * (1 + |x_i|).
Vector fd_gradient(const Expression& e, std::span<const double> x);
/// Fixed absolute step `h` for every coordinate.
Vector fd_gradient(const Expression& e, std::span<const double> x, double h);
/// Default per-coordinate step: eps^(1/4) * (1 + |x_i|).
Matrix fd_hessian(const Expression& e, std::span<const double> x);
Matrix fd_hessian(const Expression& e, std::span<const double> x, double h);

/// True when `name` is a valid variable identifier (and not a function name).
bool is_identifier(std::string_view name);

}  // namespace lagcrit

#endif  // LAGCRIT_EXPR_HPP_
