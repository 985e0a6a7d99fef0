#include "ym/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ym {

namespace {

std::string fmt(double v) { return format_double(v); }

std::string describe(const Interval& i) {
  return "[" + fmt(i.lo()) + ", " + fmt(i.hi()) + ")";
}

std::optional<Range> endpoint_image(const Interval& domain,
                                    const std::variant<MonotoneBody, ConstantBody>& body) {
  if (const auto* c = std::get_if<ConstantBody>(&body)) {
    if (!std::isfinite(c->value)) return std::nullopt;
    return Range{c->value, c->value};
  }
  const auto& m = std::get<MonotoneBody>(body);
  try {
    const double a = evaluate(m.expr, domain.lo());
    const double b = evaluate(m.expr, domain.hi());
    return Range{std::min(a, b), std::max(a, b)};
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw ValidationError(ValidationIssue::bad_interval,
                          "interval needs finite lo < hi, got [" + fmt(lo) + ", " +
                              fmt(hi) + "]");
}

Piece::Piece(Interval domain, std::variant<MonotoneBody, ConstantBody> body)
    : domain_(domain), body_(std::move(body)), image_(endpoint_image(domain_, body_)) {}

Piece Piece::monotone(Interval domain, Expr expr, Direction direction) {
  Expr derivative = differentiate(expr);
  return Piece(domain, MonotoneBody{std::move(expr), direction, std::move(derivative)});
}

Piece Piece::constant(Interval domain, double value) {
  return Piece(domain, ConstantBody{value});
}

double Piece::value_at(double x) const {
  if (const auto* c = std::get_if<ConstantBody>(&body_)) return c->value;
  return evaluate(std::get<MonotoneBody>(body_).expr, x);
}

Range image(const Piece& piece) {
  if (!piece.cached_image())
    throw ValidationError(ValidationIssue::unbounded,
                          "piece on " + describe(piece.domain()) +
                              " is not finite at an endpoint");
  return *piece.cached_image();
}

Inversion invert_detailed(const Piece& piece, double y, double tol_x) {
  const Range img = image(piece);
  const double slack = 1e-12 * std::max(1.0, std::max(std::fabs(img.lo), std::fabs(img.hi)));
  if (!(y >= img.lo - slack && y <= img.hi + slack))
    throw OutOfRangeError("value " + fmt(y) + " is outside the piece image [" +
                          fmt(img.lo) + ", " + fmt(img.hi) + "]");
  if (piece.is_constant()) return {piece.domain().lo(), 0};

  const auto& body = piece.monotone_body();
  const bool increasing = body.direction == Direction::increasing;
  double lo = piece.domain().lo();
  double hi = piece.domain().hi();
  // The image ends are the values at the domain ends, so these are exact.
  if (y <= img.lo) return {increasing ? lo : hi, 0};
  if (y >= img.hi) return {increasing ? hi : lo, 0};
  const double width = hi - lo;
  const int max_iter =
      tol_x > 0.0 ? std::clamp(static_cast<int>(std::ceil(std::log2(width / tol_x))), 1, 2000)
                  : 2000;
  int iter = 0;
  while (iter < max_iter) {
    const double mid = std::midpoint(lo, hi);
    if (mid <= lo || mid >= hi) break;
    ++iter;
    const double fm = evaluate(body.expr, mid);
    if ((fm < y) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {std::midpoint(lo, hi), iter};
}

double invert(const Piece& piece, double y, double tol_x) {
  return invert_detailed(piece, y, tol_x).x;
}

double invert(const Piece& piece, double y) {
  return invert(piece, y, kDefaultRelativeTolX * piece.domain().length());
}

double inverse_derivative_magnitude(const Piece& piece, double y) {
  const double x = invert(piece, y, 0.0);
  const double d = std::fabs(evaluate(piece.monotone_body().derivative, x));
  if (d < kDerivativeFloor) throw SingularityError(y, x, d);
  return 1.0 / d;
}

// ---------------------------------------------------------------------------

PiecewiseFunction::PiecewiseFunction(Interval omega, std::vector<Piece> pieces)
    : omega_(omega), pieces_(std::move(pieces)) {
  std::stable_sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) {
    return a.domain().lo() < b.domain().lo();
  });
  Range k{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Piece& p : pieces_) {
    if (!p.cached_image()) return;
    k.lo = std::min(k.lo, p.cached_image()->lo);
    k.hi = std::max(k.hi, p.cached_image()->hi);
  }
  if (!pieces_.empty()) k_range_ = k;
}

const Range& PiecewiseFunction::k_range() const {
  if (!k_range_)
    throw ValidationError(ValidationIssue::unbounded,
                          "value range is undefined: a piece is not finite on its closure");
  return *k_range_;
}

const Piece& PiecewiseFunction::piece_at(double x) const {
  if (!(x > omega_.lo() && x < omega_.hi()))
    throw OutOfRangeError("x = " + fmt(x) + " is outside omega ]" + fmt(omega_.lo()) +
                          ", " + fmt(omega_.hi()) + "[");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < p.domain().lo(); });
  if (it == pieces_.begin()) throw OutOfRangeError("x = " + fmt(x) + " is not covered");
  --it;
  if (x >= it->domain().hi() && std::next(it) != pieces_.end())
    throw OutOfRangeError("x = " + fmt(x) + " falls in a gap");
  return *it;
}

double PiecewiseFunction::eval(double x) const { return piece_at(x).value_at(x); }

// ---------------------------------------------------------------------------
// Validation

namespace {

ValidationResult fail(ValidationIssue issue, const std::string& message) {
  return ValidationResult{ValidationError(issue, message)};
}

double derivative_near(const MonotoneBody& body, double x, double inward) {
  try {
    return evaluate(body.derivative, x);
  } catch (const DomainError&) {
    // One-sided: an endpoint may sit on a removable or infinite slope.
    return evaluate(body.derivative, x + inward);
  }
}

ValidationResult check_monotone(const Piece& p, std::size_t index, int samples) {
  const auto& body = p.monotone_body();
  const double lo = p.domain().lo();
  const double w = p.domain().length();
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(samples) + 2);
  xs.push_back(lo);
  for (int j = 1; j <= samples; ++j) xs.push_back(lo + j * w / (samples + 1));
  xs.push_back(p.domain().hi());

  const std::string name = "piece " + std::to_string(index) + " on " + describe(p.domain());
  std::vector<double> ds(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool at_end = i == 0 || i + 1 == xs.size();
    try {
      const double v = evaluate(body.expr, xs[i]);
      if (!std::isfinite(v)) throw DomainError("non-finite value", render(body.expr));
    } catch (const DomainError& e) {
      return fail(ValidationIssue::unbounded,
                  name + " is not finite at x = " + fmt(xs[i]) + ": " + e.what());
    }
    try {
      const double inward = i == 0 ? 1e-9 * w : -1e-9 * w;
      ds[i] = at_end ? derivative_near(body, xs[i], inward) : evaluate(body.derivative, xs[i]);
    } catch (const DomainError& e) {
      return fail(ValidationIssue::monotonicity,
                  name + " has no derivative at x = " + fmt(xs[i]) + ": " + e.what());
    }
  }

  double scale = 0.0;
  for (double d : ds) scale = std::max(scale, std::fabs(d));
  if (scale == 0.0)
    return fail(ValidationIssue::monotonicity, name + " has an identically zero derivative");

  // Zero slope at isolated points (critical points at piece ends) is allowed;
  // a wrong-signed slope beyond rounding is not.
  const double sign = body.direction == Direction::increasing ? 1.0 : -1.0;
  const double tol = 1e-9 * scale;
  std::size_t worst = xs.size();
  double worst_value = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double signed_d = sign * ds[i];
    if (signed_d < -tol && signed_d < worst_value) {
      worst = i;
      worst_value = signed_d;
    }
  }
  if (worst != xs.size())
    return fail(ValidationIssue::monotonicity,
                name + " declared " +
                    (body.direction == Direction::increasing ? "increasing" : "decreasing") +
                    " but u'(" + fmt(xs[worst]) + ") = " + fmt(ds[worst]));
  return {};
}

}  // namespace

ValidationResult validate(const PiecewiseFunction& pf, int samples_per_piece) {
  const auto pieces = pf.pieces();
  if (pieces.empty()) return fail(ValidationIssue::empty, "no pieces");
  if (samples_per_piece < 1)
    return fail(ValidationIssue::precondition, "samples_per_piece must be positive");

  const Interval& omega = pf.omega();
  const double meet_tol = 1e-12 * omega.length();

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Interval& d = pieces[i].domain();
    if (d.lo() < omega.lo() - meet_tol || d.hi() > omega.hi() + meet_tol)
      return fail(ValidationIssue::outside_omega,
                  "piece " + std::to_string(i) + " on " + describe(d) +
                      " leaves omega " + describe(omega));
  }
  if (pieces.front().domain().lo() > omega.lo() + meet_tol)
    return fail(ValidationIssue::gap, "uncovered subinterval ]" + fmt(omega.lo()) + ", " +
                                          fmt(pieces.front().domain().lo()) + "[");
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Interval& a = pieces[i].domain();
    const Interval& b = pieces[i + 1].domain();
    if (a.hi() > b.lo() + meet_tol)
      return fail(ValidationIssue::overlap,
                  "pieces " + std::to_string(i) + " and " + std::to_string(i + 1) +
                      " overlap on ]" + fmt(b.lo()) + ", " + fmt(std::min(a.hi(), b.hi())) +
                      "[");
    if (a.hi() < b.lo() - meet_tol)
      return fail(ValidationIssue::gap,
                  "uncovered subinterval ]" + fmt(a.hi()) + ", " + fmt(b.lo()) + "[");
  }
  if (pieces.back().domain().hi() < omega.hi() - meet_tol)
    return fail(ValidationIssue::gap, "uncovered subinterval ]" +
                                          fmt(pieces.back().domain().hi()) + ", " +
                                          fmt(omega.hi()) + "[");

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (p.is_constant()) {
      if (!std::isfinite(p.constant_value()))
        return fail(ValidationIssue::unbounded,
                    "piece " + std::to_string(i) + " has a non-finite constant");
      continue;
    }
    if (auto r = check_monotone(p, i, samples_per_piece); !r) return r;
  }
  if (!pf.has_k_range())
    return fail(ValidationIssue::unbounded, "value range is undefined");
  return {};
}

void ensure_valid(const PiecewiseFunction& pf, int samples_per_piece) {
  ValidationResult r = validate(pf, samples_per_piece);
  if (!r) throw *r.error;
}

}  // namespace ym
