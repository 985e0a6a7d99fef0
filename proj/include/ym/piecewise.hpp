#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ym/error.hpp"
#include "ym/expr.hpp"

namespace ym {

/// Nonempty bounded interval, lo < hi, both finite. Whether the ends are
/// open is a property of where it is used (Ω is open, pieces half-open).
class Interval {
 public:
  /// Throws ValidationError(bad_interval).
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// Closed range [lo, hi] with lo <= hi; a single point when lo == hi.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool is_point() const noexcept { return lo == hi; }
  bool contains(double y) const noexcept { return lo <= y && y <= hi; }
  friend bool operator==(const Range&, const Range&) = default;
};

enum class Direction { increasing, decreasing };

struct MonotoneBody {
  Expr expr;
  Direction direction;
  Expr derivative;
};

struct ConstantBody {
  double value;
};

class Piece {
 public:
  static Piece monotone(Interval domain, Expr expr, Direction direction);
  static Piece constant(Interval domain, double value);

  const Interval& domain() const noexcept { return domain_; }
  bool is_constant() const noexcept { return std::holds_alternative<ConstantBody>(body_); }
  const MonotoneBody& monotone_body() const { return std::get<MonotoneBody>(body_); }
  double constant_value() const { return std::get<ConstantBody>(body_).value; }

  /// u(x); no check that x lies in the domain.
  double value_at(double x) const;

  /// Endpoint values, or nullopt when the expression is undefined or
  /// non-finite at an endpoint of the closure.
  const std::optional<Range>& cached_image() const noexcept { return image_; }

 private:
  Piece(Interval domain, std::variant<MonotoneBody, ConstantBody> body);

  Interval domain_;
  std::variant<MonotoneBody, ConstantBody> body_;
  std::optional<Range> image_;
};

/// The set u(I): for monotone pieces the range between the endpoint values,
/// for constant pieces the single point. Throws ValidationError(unbounded)
/// when the endpoint values are not finite.
Range image(const Piece& piece);

inline constexpr double kDefaultRelativeTolX = 1e-12;
/// |u'| floor below which the inverse derivative is reported as singular.
inline constexpr double kDerivativeFloor = 1e-12;

struct Inversion {
  double x;
  int iterations;
};

/// Bisection for u(x) = y on the closure of a monotone piece. Runs at most
/// ceil(log2(|domain| / tol_x)) halvings and stops early once the bracket
/// can no longer shrink in double precision.
Inversion invert_detailed(const Piece& piece, double y, double tol_x);
double invert(const Piece& piece, double y, double tol_x);
double invert(const Piece& piece, double y);

/// |(u^-1)'(y)| = 1/|u'(u^-1(y))|. Inverts to full double precision.
double inverse_derivative_magnitude(const Piece& piece, double y);

/// u = Σ uᵢ χ_{Iᵢ} on the open interval Ω. Pieces are stored sorted by
/// domain.lo; each owns [lo, hi) except that Ω itself is open.
class PiecewiseFunction {
 public:
  PiecewiseFunction(Interval omega, std::vector<Piece> pieces);

  const Interval& omega() const noexcept { return omega_; }
  std::span<const Piece> pieces() const noexcept { return pieces_; }

  /// Smallest closed interval containing every piece image.
  const Range& k_range() const;
  bool has_k_range() const noexcept { return k_range_.has_value(); }

  /// Throws OutOfRangeError unless omega.lo < x < omega.hi.
  const Piece& piece_at(double x) const;
  double eval(double x) const;

 private:
  Interval omega_;
  std::vector<Piece> pieces_;
  std::optional<Range> k_range_;
};

inline constexpr int kDefaultSamplesPerPiece = 64;

struct ValidationResult {
  std::optional<ValidationError> error;

  explicit operator bool() const noexcept { return !error.has_value(); }
};

/// Checks the partition (disjoint, covering, sorted, meeting at single
/// points), finiteness of every piece on its closure, and the declared sign
/// of each monotone piece's derivative at `samples_per_piece` equally
/// spaced interior points plus both ends.
ValidationResult validate(const PiecewiseFunction& pf,
                          int samples_per_piece = kDefaultSamplesPerPiece);

/// validate() that throws the ValidationError on failure.
void ensure_valid(const PiecewiseFunction& pf,
                  int samples_per_piece = kDefaultSamplesPerPiece);

}  // namespace ym
