#pragma once

// Single-variable real expressions: parsing, rendering, evaluation and
// symbolic differentiation.
//
// Grammar (whitespace insignificant):
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := ("-")? power ;
//   power  := atom ("^" integer)? ;
//   atom   := number | VAR | "pi" | func "(" expr ")" | "(" expr ")" ;
//   func   := "sin"|"cos"|"exp"|"ln"|"sqrt"|"abs" ;
//
// A quotient of two bare number literals ("2/3") is folded into a single
// constant, and so is a negated bare literal ("-3"). Parenthesised
// literals are never folded, which is what lets render() produce text that
// reparses to the identical tree.

#include <memory>
#include <string>
#include <string_view>

namespace ym {

enum class Op : unsigned char {
  constant,
  variable,
  pi,
  negate,
  add,
  sub,
  mul,
  div,
  pow,
  sin,
  cos,
  exp,
  ln,
  sqrt,
  abs,
};

bool is_function(Op op) noexcept;
bool is_binary(Op op) noexcept;
const char* function_name(Op op) noexcept;

/// Immutable expression tree. Copies share nodes.
class Expr {
 public:
  struct Node;

  /// The constant zero.
  Expr() = default;

  static Expr constant(double value);
  static Expr variable();
  static Expr pi();
  static Expr negate(Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);
  static Expr function(Op op, Expr arg);

  Op op() const noexcept;
  double value() const noexcept;    // constant nodes only
  int exponent() const noexcept;    // power nodes only
  const Expr& lhs() const noexcept; // also the argument of unary nodes
  const Expr& rhs() const noexcept;

  bool is_constant(double v) const noexcept;
  /// True when no variable appears anywhere in the tree.
  bool is_closed() const noexcept;

  friend bool operator==(const Expr& a, const Expr& b) noexcept;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct ParseOptions {
  std::string_view variable = "x";
};

Expr parse(std::string_view source, const ParseOptions& options = {});

/// Parses and evaluates a variable-free expression such as "2/3" or "pi/4".
double parse_constant(std::string_view source);

std::string render(const Expr& e, std::string_view variable = "x");

/// Throws DomainError on ln/sqrt outside their domain, division by zero,
/// zero to a negative power, and any non-finite intermediate.
double evaluate(const Expr& e, double x);

Expr differentiate(const Expr& e);

/// Replaces every occurrence of the variable with `replacement`.
Expr substitute(const Expr& e, const Expr& replacement);

// Builders with local constant folding and 0/1 identities. They are what
// differentiate() and the affine compositions use, and keep derived
// expressions short without attempting general simplification.
Expr make_add(const Expr& a, const Expr& b);
Expr make_sub(const Expr& a, const Expr& b);
Expr make_mul(const Expr& a, const Expr& b);
Expr make_div(const Expr& a, const Expr& b);
Expr make_neg(const Expr& a);
Expr make_pow(const Expr& a, int n);

/// scale*x + shift, written as a short tree.
Expr affine(double scale, double shift);

/// Shortest decimal text that reads back to exactly `v`.
std::string format_double(double v);

}  // namespace ym
