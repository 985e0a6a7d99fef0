#include "ym/oscillation.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace ym {

namespace {

[[noreturn]] void precondition(const std::string& message) {
  throw ValidationError(ValidationIssue::precondition, message);
}

Piece with_expr(const Piece& p, const Interval& domain, const Expr& expr) {
  return Piece::monotone(domain, expr, p.monotone_body().direction);
}

}  // namespace

void check_oscillation_spec(const OscillationSpec& spec) {
  if (spec.c < 1) precondition("dilation count c must be at least 1");
  const PiecewiseFunction& g = spec.generator;
  if (g.omega().lo() != 0.0 || g.omega().hi() != 1.0)
    precondition("generator must live on ]0,1[, got ]" + format_double(g.omega().lo()) +
                 ", " + format_double(g.omega().hi()) + "[");
  const Range& k = g.k_range();
  constexpr double slack = 1e-12;
  if (k.lo < -slack || k.hi > 1.0 + slack)
    precondition("generator values must lie in [0,1], got [" + format_double(k.lo) + ", " +
                 format_double(k.hi) + "]");
}

PiecewiseFunction dilate(const OscillationSpec& spec) {
  check_oscillation_spec(spec);
  ensure_valid(spec.generator);
  const double c = spec.c;
  std::vector<Piece> pieces;
  pieces.reserve(static_cast<std::size_t>(spec.c) * spec.generator.pieces().size());
  for (int k = 1; k <= spec.c; ++k) {
    const double shift = k - 1;
    const Expr inner = affine(c, -shift);
    for (const Piece& p : spec.generator.pieces()) {
      const Interval domain((shift + p.domain().lo()) / c, (shift + p.domain().hi()) / c);
      if (p.is_constant()) {
        pieces.push_back(Piece::constant(domain, p.constant_value()));
      } else {
        pieces.push_back(with_expr(p, domain, substitute(p.monotone_body().expr, inner)));
      }
    }
  }
  PiecewiseFunction out(Interval(0.0, 1.0), std::move(pieces));
  ensure_valid(out);
  return out;
}

PiecewiseFunction rescale(const PiecewiseFunction& pf, const Interval& new_omega,
                          const Range& new_k) {
  const Interval& omega = pf.omega();
  const Range& k = pf.k_range();
  if (new_k.is_point()) precondition("target value range is a single point");
  if (k.is_point()) precondition("source value range is a single point");

  const double x_scale = new_omega.length() / omega.length();
  const auto map_x = [&](double x) {
    if (x == omega.lo()) return new_omega.lo();
    if (x == omega.hi()) return new_omega.hi();
    return new_omega.lo() + (x - omega.lo()) * x_scale;
  };
  const double v_scale = new_k.length() / k.length();
  const auto map_v = [&](double v) {
    if (v == k.lo) return new_k.lo;
    if (v == k.hi) return new_k.hi;
    return new_k.lo + (v - k.lo) * v_scale;
  };

  // Old coordinate as a function of the new one.
  const double back_scale = omega.length() / new_omega.length();
  const Expr old_x = affine(back_scale, omega.lo() - new_omega.lo() * back_scale);

  std::vector<Piece> pieces;
  pieces.reserve(pf.pieces().size());
  for (const Piece& p : pf.pieces()) {
    const Interval domain(map_x(p.domain().lo()), map_x(p.domain().hi()));
    if (p.is_constant()) {
      pieces.push_back(Piece::constant(domain, map_v(p.constant_value())));
      continue;
    }
    const Expr inner = substitute(p.monotone_body().expr, old_x);
    const Expr value = make_add(
        Expr::constant(new_k.lo),
        make_mul(Expr::constant(v_scale), make_sub(inner, Expr::constant(k.lo))));
    pieces.push_back(with_expr(p, domain, value));
  }
  return PiecewiseFunction(new_omega, std::move(pieces));
}

// ---------------------------------------------------------------------------
// Example families

std::optional<ExampleTag> parse_example_tag(std::string_view tag) {
  if (tag.size() != 1) return std::nullopt;
  switch (tag[0]) {
    case 'a': return ExampleTag::a;
    case 'b': return ExampleTag::b;
    case 'c': return ExampleTag::c;
    case 'd': return ExampleTag::d;
    case 'e': return ExampleTag::e;
    default: return std::nullopt;
  }
}

char to_char(ExampleTag tag) {
  switch (tag) {
    case ExampleTag::a: return 'a';
    case ExampleTag::b: return 'b';
    case ExampleTag::c: return 'c';
    case ExampleTag::d: return 'd';
    case ExampleTag::e: return 'e';
  }
  return '?';
}

void ExampleParams::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) precondition("parameter must be key=value");
  const std::string_view key = assignment.substr(0, eq);
  const std::string_view text = assignment.substr(eq + 1);
  double v = 0.0;
  try {
    v = parse_constant(text);
  } catch (const Error& e) {
    precondition("parameter " + std::string(key) + ": " + e.what());
  }
  const auto as_int = [&]() {
    if (v != std::floor(v) || std::fabs(v) > 1e9)
      precondition("parameter " + std::string(key) + " must be an integer");
    return static_cast<int>(v);
  };
  if (key == "a") {
    a = v;
  } else if (key == "b") {
    b = v;
  } else if (key == "n") {
    n = as_int();
  } else if (key == "kmax" || key == "k_max") {
    k_max = as_int();
  } else {
    precondition("unknown parameter '" + std::string(key) + "'");
  }
}

namespace {

PiecewiseFunction example_a(double a, double b, int n) {
  // Sawtooth with 2n linear teeth of slope ±2nb/a on ]0,a[.
  std::vector<Piece> pieces;
  const double slope = 2.0 * n * b / a;
  const auto boundary = [&](int j) { return a * j / (2.0 * n); };
  for (int k = 0; k < n; ++k) {
    pieces.push_back(Piece::monotone(Interval(boundary(2 * k), boundary(2 * k + 1)),
                                     affine(slope, -2.0 * b * k), Direction::increasing));
    pieces.push_back(Piece::monotone(Interval(boundary(2 * k + 1), boundary(2 * k + 2)),
                                     affine(-slope, 2.0 * b * (k + 1)), Direction::decreasing));
  }
  return PiecewiseFunction(Interval(0.0, a), std::move(pieces));
}

PiecewiseFunction example_b_generator() {
  std::vector<Piece> pieces;
  pieces.push_back(Piece::monotone(Interval(0.0, 1.0 / 6.0), parse("3*x"), Direction::increasing));
  pieces.push_back(Piece::monotone(Interval(1.0 / 6.0, 0.5), parse("3/2*x + 1/4"),
                                   Direction::increasing));
  pieces.push_back(Piece::monotone(Interval(0.5, 5.0 / 6.0), parse("-3/2*x + 7/4"),
                                   Direction::decreasing));
  pieces.push_back(Piece::monotone(Interval(5.0 / 6.0, 1.0), parse("-3*x + 3"),
                                   Direction::decreasing));
  return PiecewiseFunction(Interval(0.0, 1.0), std::move(pieces));
}

PiecewiseFunction example_c(int n) {
  // sin(2πnx) split at its critical points (2k+1)/(4n), k = 0..2n-1.
  const Expr u = n == 1 ? parse("sin(2*pi*x)")
                        : parse("sin(2*pi*" + std::to_string(n) + "*x)");
  std::vector<double> cuts{0.0};
  for (int k = 0; k < 2 * n; ++k) cuts.push_back((2.0 * k + 1.0) / (4.0 * n));
  cuts.push_back(1.0);
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Direction dir = i % 2 == 0 ? Direction::increasing : Direction::decreasing;
    pieces.push_back(Piece::monotone(Interval(cuts[i], cuts[i + 1]), u, dir));
  }
  return PiecewiseFunction(Interval(0.0, 1.0), std::move(pieces));
}

PiecewiseFunction example_d(double a, double b, int n) {
  // n copies of: a on the first third, b on the remaining two thirds of ]0,2[.
  std::vector<Piece> pieces;
  const auto boundary = [&](int m) { return 2.0 * m / (3.0 * n); };
  for (int j = 0; j < n; ++j) {
    pieces.push_back(Piece::constant(Interval(boundary(3 * j), boundary(3 * j + 1)), a));
    pieces.push_back(Piece::constant(Interval(boundary(3 * j + 1), boundary(3 * j + 3)), b));
  }
  return PiecewiseFunction(Interval(0.0, 2.0), std::move(pieces));
}

PiecewiseFunction example_e(int n, int k_max) {
  std::vector<Piece> pieces;
  pieces.reserve(static_cast<std::size_t>(k_max) + 1);
  const auto str = [](long long v) { return std::to_string(v); };
  for (long long k = 1; k <= k_max; ++k) {
    const Interval domain(static_cast<double>(k - 1) / static_cast<double>(n + k - 1),
                          static_cast<double>(k) / static_cast<double>(n + k));
    if (k % 2 == 1) {
      const Expr u = parse("(x*" + str(n + k - 1) + " - " + str(k) + " + 1)*" + str(n + k) +
                           "/" + str(n));
      pieces.push_back(Piece::monotone(domain, u, Direction::increasing));
    } else {
      const Expr u = parse("(" + str(k) + " - x*" + str(n + k) + ")*" + str(n + k - 1) + "/" +
                           str(n));
      pieces.push_back(Piece::monotone(domain, u, Direction::decreasing));
    }
  }
  // Truncation tail: the pieces beyond k_max accumulate at 1 and are
  // replaced by the constant 0, an atom of weight n/(n+k_max).
  const double tail = static_cast<double>(k_max) / static_cast<double>(n + k_max);
  pieces.push_back(Piece::constant(Interval(tail, 1.0), 0.0));
  return PiecewiseFunction(Interval(0.0, 1.0), std::move(pieces));
}

int require_count(const std::optional<int>& v, int fallback, const char* name) {
  const int n = v.value_or(fallback);
  if (n < 1) precondition(std::string(name) + " must be at least 1");
  return n;
}

double require_positive(const std::optional<double>& v, double fallback, const char* name) {
  const double x = v.value_or(fallback);
  if (!(x > 0.0) || !std::isfinite(x)) precondition(std::string(name) + " must be positive");
  return x;
}

}  // namespace

PiecewiseFunction build_example(ExampleTag tag, const ExampleParams& params) {
  PiecewiseFunction pf = [&] {
    switch (tag) {
      case ExampleTag::a:
        return example_a(require_positive(params.a, 1.0, "a"),
                         require_positive(params.b, 1.0, "b"),
                         require_count(params.n, 1, "n"));
      case ExampleTag::b: {
        const int n = require_count(params.n, 1, "n");
        PiecewiseFunction g = example_b_generator();
        return n == 1 ? g : dilate(OscillationSpec{g, n});
      }
      case ExampleTag::c:
        return example_c(require_count(params.n, 1, "n"));
      case ExampleTag::d:
        return example_d(require_positive(params.a, 1.0, "a"),
                         require_positive(params.b, 2.0, "b"),
                         require_count(params.n, 1, "n"));
      case ExampleTag::e:
        return example_e(require_count(params.n, 2, "n"),
                         require_count(params.k_max, 1000, "kmax"));
    }
    precondition("unknown example");
  }();
  ensure_valid(pf);
  return pf;
}

// ---------------------------------------------------------------------------

namespace {

__extension__ typedef unsigned __int128 u128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

double weight_sum(std::int64_t n, std::int64_t k_max) {
  if (n < 1 || k_max < 0) precondition("weight_sum needs n >= 1 and k_max >= 0");
  // Running fraction num/den of Σ 1/((n+k-1)(n+k)), kept in lowest terms.
  u128 num = 0;
  u128 den = 1;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const u128 term_den = static_cast<u128>(n + k - 1) * static_cast<u128>(n + k);
    const u128 g = gcd128(den, term_den);
    const u128 lcm = den / g * term_den;
    num = num * (lcm / den) + lcm / term_den;
    den = lcm;
    const u128 r = gcd128(num, den);
    num /= r;
    den /= r;
  }
  num *= static_cast<u128>(n);
  const u128 r = gcd128(num, den);
  num /= r;
  den /= r;
  constexpr u128 exact_limit = u128{1} << 53;
  if (num < exact_limit && den < exact_limit)
    return static_cast<double>(num) / static_cast<double>(den);  // one correctly rounded division
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace ym
