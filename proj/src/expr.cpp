#include "ym/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>
#include <vector>

#include "ym/error.hpp"

namespace ym {

struct Expr::Node {
  Op op = Op::constant;
  double value = 0.0;
  int exponent = 0;
  Expr lhs;  // only meaningful for non-leaf nodes
  Expr rhs;
  bool closed = true;
};

namespace {

const Expr& null_expr() {
  static const Expr empty;
  return empty;
}

}  // namespace

bool is_function(Op op) noexcept {
  switch (op) {
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::ln:
    case Op::sqrt:
    case Op::abs:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) noexcept {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div;
}

const char* function_name(Op op) noexcept {
  switch (op) {
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::ln: return "ln";
    case Op::sqrt: return "sqrt";
    case Op::abs: return "abs";
    default: return "";
  }
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  static const Expr v = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    n->closed = false;
    return Expr(std::move(n));
  }();
  return v;
}

Expr Expr::pi() {
  static const Expr p = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::pi;
    return Expr(std::move(n));
  }();
  return p;
}

Expr Expr::negate(Expr arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::negate;
  n->closed = arg.is_closed();
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->closed = lhs.is_closed() && rhs.is_closed();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->exponent = exponent;
  n->closed = base.is_closed();
  n->lhs = std::move(base);
  return Expr(std::move(n));
}

Expr Expr::function(Op op, Expr arg) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->closed = arg.is_closed();
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_ ? node_->op : Op::constant; }
double Expr::value() const noexcept { return node_ ? node_->value : 0.0; }
int Expr::exponent() const noexcept { return node_ ? node_->exponent : 0; }
const Expr& Expr::lhs() const noexcept { return node_ ? node_->lhs : null_expr(); }
const Expr& Expr::rhs() const noexcept { return node_ ? node_->rhs : null_expr(); }
bool Expr::is_closed() const noexcept { return node_ ? node_->closed : true; }

bool Expr::is_constant(double v) const noexcept {
  return op() == Op::constant && value() == v;
}

bool operator==(const Expr& a, const Expr& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::constant:
      return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case Op::variable:
    case Op::pi:
      return true;
    case Op::pow:
      return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    default:
      if (is_binary(a.op())) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
      return a.lhs() == b.lhs();
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Parsed {
  Expr expr;
  bool literal;  // bare number literal (possibly folded), eligible for folding
};

const std::vector<std::string>& atom_expected() {
  static const std::vector<std::string> e{"number", "variable", "'pi'", "function",
                                          "'('"};
  return e;
}

class Parser {
 public:
  Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

  Expr parse_all() {
    if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError("empty expression", 0, atom_expected());
    Parsed e = expr();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'",
                       pos_, {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return e.expr;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
            src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Parsed expr() {
    Parsed lhs = term();
    for (;;) {
      if (accept('+')) {
        Parsed rhs = term();
        lhs = {Expr::binary(Op::add, lhs.expr, rhs.expr), false};
      } else if (accept('-')) {
        Parsed rhs = term();
        lhs = {Expr::binary(Op::sub, lhs.expr, rhs.expr), false};
      } else {
        return lhs;
      }
    }
  }

  Parsed term() {
    Parsed lhs = factor();
    for (;;) {
      if (accept('*')) {
        Parsed rhs = factor();
        lhs = {Expr::binary(Op::mul, lhs.expr, rhs.expr), false};
      } else if (accept('/')) {
        Parsed rhs = factor();
        if (lhs.literal && rhs.literal && rhs.expr.value() != 0.0) {
          lhs = {Expr::constant(lhs.expr.value() / rhs.expr.value()), true};
        } else {
          lhs = {Expr::binary(Op::div, lhs.expr, rhs.expr), false};
        }
      } else {
        return lhs;
      }
    }
  }

  Parsed factor() {
    if (accept('-')) {
      Parsed p = power();
      if (p.literal) return {Expr::constant(-p.expr.value()), true};
      return {Expr::negate(p.expr), false};
    }
    return power();
  }

  Parsed power() {
    Parsed base = atom();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      std::size_t end = pos_;
      if (end < src_.size() && (src_[end] == '-' || src_[end] == '+')) ++end;
      while (end < src_.size() && src_[end] >= '0' && src_[end] <= '9') ++end;
      int n = 0;
      const char* first =
          src_.data() + start + (start < src_.size() && src_[start] == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(first, src_.data() + end, n);
      if (ec != std::errc{} || ptr != src_.data() + end)
        throw ParseError("expected integer exponent", start, {"integer"});
      pos_ = end;
      return {Expr::power(base.expr, n), false};
    }
    return base;
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
  }

  Parsed atom() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError("unexpected end of input", pos_, atom_expected());
    const char c = src_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') return {Expr::constant(number()), true};
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == var_) return {Expr::variable(), false};
      if (name == "pi") return {Expr::pi(), false};
      static constexpr std::array kFuncs{Op::sin, Op::cos, Op::exp,
                                         Op::ln,  Op::sqrt, Op::abs};
      for (Op f : kFuncs) {
        if (name == function_name(f)) {
          if (!accept('(')) throw ParseError("expected '('", pos_, {"'('"});
          Parsed arg = expr();
          if (!accept(')')) throw ParseError("expected ')'", pos_, {"')'"});
          return {Expr::function(f, arg.expr), false};
        }
      }
      throw UnknownIdentifierError(std::string(name), start);
    }
    if (c == '(') {
      ++pos_;
      Parsed inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_, {"')'"});
      return {inner.expr, false};
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_,
                     atom_expected());
  }

  double number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < src_.size() && src_[end] >= '0' && src_[end] <= '9') ++end;
    };
    digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      digits();
    }
    // Exponent only when digits follow, so "2exp(x)" is not swallowed.
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && src_[e] >= '0' && src_[e] <= '9') {
        end = e;
        digits();
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + end, v);
    if (ec != std::errc{} || ptr != src_.data() + end || !std::isfinite(v))
      throw ParseError("malformed number", start, {"number"});
    pos_ = end;
    return v;
  }

  std::string_view src_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, const ParseOptions& options) {
  return Parser(source, options.variable).parse_all();
}

double parse_constant(std::string_view source) {
  // No name can collide with the empty variable, so any identifier other
  // than pi or a function is rejected.
  const Expr e = parse(source, ParseOptions{.variable = ""});
  return evaluate(e, 0.0);
}

// ---------------------------------------------------------------------------
// Rendering

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

namespace {

// 1: sum, 2: product, 3: signed factor, 4: power, 5: atom
int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      return 1;
    case Op::mul:
    case Op::div:
      return 2;
    case Op::negate:
      return 3;
    case Op::constant:
      return std::signbit(e.value()) ? 3 : 5;
    case Op::pow:
      return 4;
    default:
      return 5;
  }
}

void render_into(std::string& out, const Expr& e, int min_prec, std::string_view var);

void render_raw(std::string& out, const Expr& e, std::string_view var) {
  switch (e.op()) {
    case Op::constant:
      out += format_double(e.value());
      return;
    case Op::variable:
      out += var;
      return;
    case Op::pi:
      out += "pi";
      return;
    case Op::add:
    case Op::sub:
      render_into(out, e.lhs(), 1, var);
      out += e.op() == Op::add ? " + " : " - ";
      render_into(out, e.rhs(), 2, var);
      return;
    case Op::mul:
      render_into(out, e.lhs(), 2, var);
      out += '*';
      render_into(out, e.rhs(), 3, var);
      return;
    case Op::div:
      render_into(out, e.lhs(), 2, var);
      out += '/';
      // A bare literal divisor would fold on reparse.
      if (e.rhs().op() == Op::constant) {
        out += '(';
        render_raw(out, e.rhs(), var);
        out += ')';
      } else {
        render_into(out, e.rhs(), 3, var);
      }
      return;
    case Op::negate:
      out += '-';
      if (e.lhs().op() == Op::constant) {
        out += '(';
        render_raw(out, e.lhs(), var);
        out += ')';
      } else {
        render_into(out, e.lhs(), 4, var);
      }
      return;
    case Op::pow:
      render_into(out, e.lhs(), 5, var);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    default:
      out += function_name(e.op());
      out += '(';
      render_into(out, e.lhs(), 1, var);
      out += ')';
      return;
  }
}

void render_into(std::string& out, const Expr& e, int min_prec, std::string_view var) {
  if (precedence(e) < min_prec) {
    out += '(';
    render_raw(out, e, var);
    out += ')';
  } else {
    render_raw(out, e, var);
  }
}

}  // namespace

std::string render(const Expr& e, std::string_view variable) {
  std::string out;
  render_into(out, e, 1, variable);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_fail(const char* what, const Expr& node) {
  throw DomainError(what, render(node));
}

double checked(double v, const Expr& node) {
  if (!std::isfinite(v)) domain_fail("non-finite result", node);
  return v;
}

double eval_node(const Expr& e, double x) {
  switch (e.op()) {
    case Op::constant:
      return e.value();
    case Op::variable:
      return x;
    case Op::pi:
      return std::numbers::pi;
    case Op::negate:
      return -eval_node(e.lhs(), x);
    case Op::add:
      return checked(eval_node(e.lhs(), x) + eval_node(e.rhs(), x), e);
    case Op::sub:
      return checked(eval_node(e.lhs(), x) - eval_node(e.rhs(), x), e);
    case Op::mul:
      return checked(eval_node(e.lhs(), x) * eval_node(e.rhs(), x), e);
    case Op::div: {
      const double num = eval_node(e.lhs(), x);
      const double den = eval_node(e.rhs(), x);
      if (den == 0.0) domain_fail("division by zero", e);
      return checked(num / den, e);
    }
    case Op::pow: {
      const double b = eval_node(e.lhs(), x);
      const int n = e.exponent();
      if (b == 0.0 && n < 0) domain_fail("zero to a negative power", e);
      return checked(std::pow(b, n), e);
    }
    case Op::sin:
      return std::sin(eval_node(e.lhs(), x));
    case Op::cos:
      return std::cos(eval_node(e.lhs(), x));
    case Op::exp:
      return checked(std::exp(eval_node(e.lhs(), x)), e);
    case Op::ln: {
      const double a = eval_node(e.lhs(), x);
      if (!(a > 0.0)) domain_fail("logarithm of a nonpositive value", e);
      return std::log(a);
    }
    case Op::sqrt: {
      const double a = eval_node(e.lhs(), x);
      if (a < 0.0) domain_fail("square root of a negative value", e);
      return std::sqrt(a);
    }
    case Op::abs:
      return std::fabs(eval_node(e.lhs(), x));
  }
  return 0.0;
}

}  // namespace

double evaluate(const Expr& e, double x) { return eval_node(e, x); }

// ---------------------------------------------------------------------------
// Folding builders

Expr make_add(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (a.op() == Op::constant && b.op() == Op::constant)
    return Expr::constant(a.value() + b.value());
  if (b.op() == Op::constant && b.value() < 0.0)
    return Expr::binary(Op::sub, a, Expr::constant(-b.value()));
  return Expr::binary(Op::add, a, b);
}

Expr make_sub(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return make_neg(b);
  if (a.op() == Op::constant && b.op() == Op::constant)
    return Expr::constant(a.value() - b.value());
  return Expr::binary(Op::sub, a, b);
}

Expr make_mul(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.op() == Op::constant && b.op() == Op::constant)
    return Expr::constant(a.value() * b.value());
  return Expr::binary(Op::mul, a, b);
}

Expr make_div(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.op() == Op::constant && b.op() == Op::constant && b.value() != 0.0)
    return Expr::constant(a.value() / b.value());
  return Expr::binary(Op::div, a, b);
}

Expr make_neg(const Expr& a) {
  if (a.op() == Op::constant) return Expr::constant(-a.value());
  if (a.op() == Op::negate) return a.lhs();
  return Expr::negate(a);
}

Expr make_pow(const Expr& a, int n) {
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return a;
  return Expr::power(a, n);
}

Expr affine(double scale, double shift) {
  return make_add(make_mul(Expr::constant(scale), Expr::variable()),
                  Expr::constant(shift));
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
  switch (e.op()) {
    case Op::constant:
    case Op::pi:
      return Expr::constant(0.0);
    case Op::variable:
      return Expr::constant(1.0);
    case Op::negate:
      return make_neg(differentiate(e.lhs()));
    case Op::add:
      return make_add(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::sub:
      return make_sub(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::mul:
      return make_add(make_mul(differentiate(e.lhs()), e.rhs()),
                      make_mul(e.lhs(), differentiate(e.rhs())));
    case Op::div: {
      const Expr da = differentiate(e.lhs());
      const Expr db = differentiate(e.rhs());
      if (db.is_constant(0.0)) return make_div(da, e.rhs());
      return make_div(make_sub(make_mul(da, e.rhs()), make_mul(e.lhs(), db)),
                      make_pow(e.rhs(), 2));
    }
    case Op::pow: {
      const int n = e.exponent();
      return make_mul(
          make_mul(Expr::constant(static_cast<double>(n)), make_pow(e.lhs(), n - 1)),
          differentiate(e.lhs()));
    }
    case Op::sin:
      return make_mul(differentiate(e.lhs()), Expr::function(Op::cos, e.lhs()));
    case Op::cos:
      return make_neg(
          make_mul(differentiate(e.lhs()), Expr::function(Op::sin, e.lhs())));
    case Op::exp:
      return make_mul(differentiate(e.lhs()), e);
    case Op::ln:
      return make_div(differentiate(e.lhs()), e.lhs());
    case Op::sqrt:
      return make_div(differentiate(e.lhs()), make_mul(Expr::constant(2.0), e));
    case Op::abs:
      // sign(u) = u/|u|; undefined at 0, reported as division by zero.
      return make_mul(differentiate(e.lhs()), Expr::binary(Op::div, e.lhs(), e));
  }
  return Expr::constant(0.0);
}

Expr substitute(const Expr& e, const Expr& replacement) {
  if (e.is_closed()) return e;
  switch (e.op()) {
    case Op::variable:
      return replacement;
    case Op::negate:
      return Expr::negate(substitute(e.lhs(), replacement));
    case Op::pow:
      return Expr::power(substitute(e.lhs(), replacement), e.exponent());
    default:
      if (is_binary(e.op()))
        return Expr::binary(e.op(), substitute(e.lhs(), replacement),
                            substitute(e.rhs(), replacement));
      return Expr::function(e.op(), substitute(e.lhs(), replacement));
  }
}

}  // namespace ym
