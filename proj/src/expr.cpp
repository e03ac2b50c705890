#include "opfrob/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "opfrob/jet.hpp"
#include "opfrob/taylor.hpp"

namespace opfrob {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_leaf(NodeKind kind) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_negate(NodePtr child) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::negate;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_power(NodePtr base, int exponent) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::power;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t dimension, VariableSet vars)
      : text_(text), dimension_(dimension), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::subtract, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::multiply, lhs, factor());
      } else if (accept('/')) {
        NodePtr rhs = factor();
        if (lhs->kind == NodeKind::integer && rhs->kind == NodeKind::integer && rhs->numerator != 0) {
          auto r = make_leaf(NodeKind::rational);
          auto node = std::const_pointer_cast<ExprNode>(r);
          node->numerator = lhs->numerator;
          node->denominator = rhs->numerator;
          node->value = static_cast<double>(lhs->numerator) / static_cast<double>(rhs->numerator);
          lhs = r;
        } else {
          lhs = make_binary(NodeKind::divide, lhs, rhs);
        }
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = atom();
    std::vector<int> exps;
    while (accept('^')) exps.push_back(integer_exponent());
    if (exps.empty()) return base;
    // Right-associative chain of integer exponents folds to one exponent.
    long long e = exps.back();
    for (std::size_t i = exps.size() - 1; i-- > 0;) {
      long long acc = 1;
      for (long long k = 0; k < std::llabs(e); ++k) {
        acc *= exps[i];
        if (std::llabs(acc) > 4096) fail("exponent too large");
      }
      if (e < 0) fail("fractional exponent");
      e = acc;
    }
    if (std::llabs(e) > 4096) fail("exponent too large");
    return make_power(base, static_cast<int>(e));
  }

  int integer_exponent() {
    skip_space();
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip_space();
    }
    bool paren = false;
    if (!negative && pos_ < text_.size() && text_[pos_] == '(') {
      // u1^(-2) is accepted as sugar for u1^-2.
      paren = true;
      ++pos_;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      skip_space();
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail("exponent must be an integer");
    }
    if (paren && !accept(')')) fail("expected ')'");
    return negative ? -value : value;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (c == '-') {
      ++pos_;
      return make_negate(factor());
    }
    if (c == 'u' || c == 'p') return variable();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr variable() {
    const std::size_t start = pos_;
    const char c = text_[pos_++];
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = start;
      fail("expected variable index after '" + std::string(1, c) + "'");
    }
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, index);
    if (ec != std::errc() || index < 1 || index > dimension_) {
      pos_ = start;
      throw ParseError("variable index out of range: " + std::string(text_.substr(start, ptr - text_.data() - start)),
                       start);
    }
    if (c == 'p' && vars_ != VariableSet::phase_space) {
      pos_ = start;
      throw ParseError("momentum variables are not allowed here", start);
    }
    auto n = std::const_pointer_cast<ExprNode>(make_leaf(NodeKind::variable));
    n->variable = (c == 'u') ? index - 1 : dimension_ + index - 1;
    return n;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    bool decimal = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      decimal = true;
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      decimal = true;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (exp_start == pos_) fail("malformed number");
    }
    const std::string literal(text_.substr(start, pos_ - start));
    if (literal == ".") {
      pos_ = start;
      fail("malformed number");
    }
    if (!decimal) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), v);
      if (ec == std::errc() && ptr == literal.data() + literal.size()) {
        auto n = std::const_pointer_cast<ExprNode>(make_leaf(NodeKind::integer));
        n->numerator = v;
        n->value = static_cast<double>(v);
        return n;
      }
    }
    auto n = std::const_pointer_cast<ExprNode>(make_leaf(NodeKind::decimal));
    n->value = std::strtod(literal.c_str(), nullptr);
    return n;
  }

  std::string_view text_;
  std::size_t dimension_;
  VariableSet vars_;
  std::size_t pos_ = 0;
};

template <class T>
T power(const T& base, int exponent) {
  if (exponent < 0) {
    if (value_of(base) == 0.0) throw EvalError("zero raised to a negative power");
    return T(1.0) / power(base, -exponent);
  }
  T result(1.0);
  T b = base;
  unsigned e = static_cast<unsigned>(exponent);
  while (e) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e) b *= b;
  }
  return result;
}

template <class T>
T evaluate(const ExprNode& n, std::span<const T> pt) {
  switch (n.kind) {
    case NodeKind::integer:
    case NodeKind::rational:
    case NodeKind::decimal:
      return T(n.value);
    case NodeKind::variable:
      return pt[n.variable];
    case NodeKind::negate:
      return -evaluate(*n.lhs, pt);
    case NodeKind::add:
      return evaluate(*n.lhs, pt) + evaluate(*n.rhs, pt);
    case NodeKind::subtract:
      return evaluate(*n.lhs, pt) - evaluate(*n.rhs, pt);
    case NodeKind::multiply:
      return evaluate(*n.lhs, pt) * evaluate(*n.rhs, pt);
    case NodeKind::divide: {
      T den = evaluate(*n.rhs, pt);
      if (value_of(den) == 0.0) throw EvalError("division by zero");
      return evaluate(*n.lhs, pt) / den;
    }
    case NodeKind::power:
      return power(evaluate(*n.lhs, pt), n.exponent);
  }
  throw EvalError("corrupt expression node");
}

template <class T>
T eval_checked(const Expression& e, std::span<const T> pt) {
  if (pt.size() != e.arity()) throw InputError("point has the wrong dimension for this expression");
  return evaluate(e.root(), pt);
}

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::subtract:
      return 1;
    case NodeKind::multiply:
    case NodeKind::divide:
      return 2;
    case NodeKind::negate:
      return 3;
    case NodeKind::power:
      return 4;
    default:
      return 5;
  }
}

std::string format_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void print(const ExprNode& n, std::size_t dim, std::string& out) {
  auto child = [&](const ExprNode& c, bool parens) {
    if (parens) out += '(';
    print(c, dim, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case NodeKind::integer:
      out += std::to_string(n.numerator);
      return;
    case NodeKind::rational:
      out += '(' + std::to_string(n.numerator) + '/' + std::to_string(n.denominator) + ')';
      return;
    case NodeKind::decimal:
      out += format_decimal(n.value);
      return;
    case NodeKind::variable:
      out += n.variable < dim ? 'u' + std::to_string(n.variable + 1) : 'p' + std::to_string(n.variable - dim + 1);
      return;
    case NodeKind::negate:
      out += '-';
      child(*n.lhs, precedence(*n.lhs) < 3);
      return;
    case NodeKind::power: {
      // Integer and variable bases print bare; anything else is parenthesized.
      const bool bare = n.lhs->kind == NodeKind::variable || n.lhs->kind == NodeKind::integer;
      child(*n.lhs, !bare);
      out += '^' + std::to_string(n.exponent);
      return;
    }
    default: {
      const int p = precedence(n);
      const char op = n.kind == NodeKind::add ? '+' : n.kind == NodeKind::subtract ? '-' : n.kind == NodeKind::multiply ? '*' : '/';
      // Equal precedence on the right keeps its parentheses so the tree (and
      // hence the floating-point result) survives a round trip.
      child(*n.lhs, precedence(*n.lhs) < p);
      out += op;
      child(*n.rhs, precedence(*n.rhs) <= p || precedence(*n.rhs) == 3);
      return;
    }
  }
}

bool has_variables(const ExprNode& n) {
  if (n.kind == NodeKind::variable) return true;
  return (n.lhs && has_variables(*n.lhs)) || (n.rhs && has_variables(*n.rhs));
}

void collect_denominators(const NodePtr& n, std::vector<NodePtr>& out) {
  if (!n) return;
  if (n->kind == NodeKind::divide) out.push_back(n->rhs);
  if (n->kind == NodeKind::power && n->exponent < 0) out.push_back(n->lhs);
  collect_denominators(n->lhs, out);
  collect_denominators(n->rhs, out);
}

}  // namespace

Expression Expression::parse(std::string_view text, std::size_t dimension, VariableSet variables) {
  if (dimension == 0) throw ParseError("dimension must be positive", 0);
  Parser p(text, dimension, variables);
  return Expression(p.parse(), dimension, variables);
}

Expression Expression::constant(double value, std::size_t dimension, VariableSet variables) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::decimal;
  n->value = value;
  if (std::nearbyint(value) == value && std::abs(value) < 1e15) {
    n->kind = NodeKind::integer;
    n->numerator = static_cast<std::int64_t>(value);
  }
  if (value < 0) {
    n->value = -value;
    n->numerator = -n->numerator;
    return Expression(make_negate(n), dimension, variables);
  }
  return Expression(n, dimension, variables);
}

Expression Expression::coordinate(std::size_t index, std::size_t dimension) {
  if (index >= dimension) throw InputError("coordinate index out of range");
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::variable;
  n->variable = index;
  return Expression(n, dimension, VariableSet::coordinates);
}

bool Expression::is_constant() const { return !root_ || !has_variables(*root_); }

double Expression::eval(std::span<const double> point) const { return eval_checked(*this, point); }
Jet Expression::eval(std::span<const Jet> point) const { return eval_checked(*this, point); }
Series Expression::eval(std::span<const Series> point) const { return eval_checked(*this, point); }

std::string Expression::to_string() const {
  std::string out;
  if (root_) print(*root_, dimension_, out);
  return out;
}

std::vector<Expression> Expression::denominators() const {
  std::vector<NodePtr> nodes;
  collect_denominators(root_, nodes);
  std::vector<Expression> out;
  out.reserve(nodes.size());
  for (auto& n : nodes) out.push_back(Expression(n, dimension_, variables_));
  return out;
}

}  // namespace opfrob
