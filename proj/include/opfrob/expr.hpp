#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opfrob/error.hpp"

namespace opfrob {

class Jet;
class Series;

// Which variable names an expression may use. Coordinates are u1..un; phase
// space adds momenta p1..pn, stored after the coordinates (p_k at n + k - 1).
enum class VariableSet { coordinates, phase_space };

enum class NodeKind : std::uint8_t { integer, rational, decimal, variable, negate, add, subtract, multiply, divide, power };

struct ExprNode {
  NodeKind kind = NodeKind::integer;
  double value = 0.0;             // integer, rational, decimal
  std::int64_t numerator = 0;     // integer, rational
  std::int64_t denominator = 1;   // rational
  std::size_t variable = 0;       // 0-based slot
  int exponent = 0;               // power
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

// Immutable arithmetic expression tree. Cheap to copy; safe to evaluate from
// several threads.
class Expression {
 public:
  Expression() = default;

  // Grammar:
  //   expr   := term (('+'|'-') term)*
  //   term   := factor (('*'|'/') factor)*
  //   factor := atom ('^' ['-'] integer)*      (right-associative)
  //   atom   := number | 'u' integer | 'p' integer | '(' expr ')' | '-' factor
  // A quotient of two integer literals is stored as an exact rational.
  static Expression parse(std::string_view text, std::size_t dimension,
                          VariableSet variables = VariableSet::coordinates);

  static Expression constant(double value, std::size_t dimension,
                             VariableSet variables = VariableSet::coordinates);
  static Expression coordinate(std::size_t index, std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  VariableSet variable_set() const noexcept { return variables_; }
  // Number of slots a point must provide: n, or 2n in phase space.
  std::size_t arity() const noexcept { return variables_ == VariableSet::phase_space ? 2 * dimension_ : dimension_; }

  bool is_constant() const;

  double eval(std::span<const double> point) const;
  Jet eval(std::span<const Jet> point) const;
  Series eval(std::span<const Series> point) const;

  // Canonical text; parse(to_string()) evaluates identically.
  std::string to_string() const;

  // Every divisor and every base raised to a negative power.
  std::vector<Expression> denominators() const;

  const ExprNode& root() const { return *root_; }

 private:
  Expression(std::shared_ptr<const ExprNode> root, std::size_t dimension, VariableSet variables)
      : root_(std::move(root)), dimension_(dimension), variables_(variables) {}

  std::shared_ptr<const ExprNode> root_;
  std::size_t dimension_ = 0;
  VariableSet variables_ = VariableSet::coordinates;
};

}  // namespace opfrob
