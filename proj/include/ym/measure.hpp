#pragma once

// The explicit Young measure of a piecewise monotone-or-constant function.
//
// For u = Σ uᵢ χ_{Iᵢ} on Ω the measure is homogeneous (independent of x):
//
//   ν = Σ_{constant pieces} (|Iᵢ|/|Ω|) δ_{pᵢ}
//     + (1/|Ω|) Σ_{monotone pieces} |(uᵢ⁻¹)'(y)| χ_{uᵢ(Iᵢ)}(y) dy
//
// always normalized by |Ω| so that ν is a probability measure on K.

#include <span>
#include <string>
#include <vector>

#include "ym/expr.hpp"
#include "ym/piecewise.hpp"
#include "ym/quadrature.hpp"

namespace ym {

struct Atom {
  double location;
  double weight;
};

struct AcSegment {
  Piece piece;
  Range support;  // image(piece)
  double mass;    // |piece.domain| / |Ω|
  bool affine = false;  // derivative is a closed expression
};

class YoungMeasure {
 public:
  YoungMeasure(std::vector<Atom> atoms, std::vector<AcSegment> segments, double omega_length,
               Range k_range);

  /// Sorted by location, one entry per distinct location.
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<AcSegment>& segments() const noexcept { return segments_; }
  double omega_length() const noexcept { return omega_length_; }
  const Range& k_range() const noexcept { return k_range_; }

 private:
  std::vector<Atom> atoms_;
  std::vector<AcSegment> segments_;
  double omega_length_;
  Range k_range_;
};

/// Validates pf (throwing ValidationError) and builds its measure.
YoungMeasure compute(const PiecewiseFunction& pf);

/// Σ atom weights + Σ segment masses, compensated.
double total_mass(const YoungMeasure& ym);

/// Density of the absolutely continuous part. A segment contributes at y
/// when y lies in [lo, hi) of its support, or at hi itself when hi is the
/// top of K. Zero outside every support; atoms contribute nothing.
double density_at(const YoungMeasure& ym, double y);

/// ν((-inf, y]). The continuous part of each segment is evaluated through
/// its antiderivative |u⁻¹(y) - u⁻¹(support.lo)| / |Ω|, located by bisection
/// (or in closed form for affine pieces).
double cdf(const YoungMeasure& ym, double y);

/// The absolutely continuous part of cdf() alone.
double continuous_cdf(const YoungMeasure& ym, double y);

/// ν((-inf, y)): as cdf() but excluding an atom sitting exactly at y.
double cdf_before(const YoungMeasure& ym, double y);

/// cdf() with the continuous part obtained by adaptive quadrature of the
/// density instead; an independent route for cross-checking.
QuadratureResult cdf_by_quadrature(const YoungMeasure& ym, double y,
                                   const QuadratureOptions& options = {});

/// ∫_K β dν: atoms exactly, each segment by adaptive quadrature of β·density
/// after the substitution y = lo + w·t²(3 - 2t), which absorbs inverse
/// square-root blow-up of the density at either end of the support.
double integrate(const YoungMeasure& ym, const Expr& beta, const QuadratureOptions& options = {});

/// (1/|Ω|) ∫_Ω β(u(x)) dx, piece by piece.
double pushforward_integral(const PiecewiseFunction& pf, const Expr& beta,
                            const QuadratureOptions& options = {});

struct IdentityCheck {
  std::string beta;  // rendered in the variable y
  double lhs;        // measure side
  double rhs;        // pushforward side
  double residual;
};

struct VerificationReport {
  std::vector<IdentityCheck> checks;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct IdentityOptions {
  QuadratureOptions quadrature;
  /// Test hook: scales the measure side by (1 + perturb) to inject a failure.
  double perturb = 0.0;
};

/// ∫ β dν against (1/|Ω|) ∫ β(u(x)) dx for every β.
VerificationReport verify_identity(const PiecewiseFunction& pf, std::span<const Expr> betas,
                                   double tolerance, const IdentityOptions& options = {});

/// {1, y, y², y³, sin y, cos y, exp y}, parsed in the variable y.
std::vector<Expr> standard_beta_family();

/// Source text of the default test-function family {1, y, y², y³, sin y, exp y}.
std::vector<std::string> default_beta_sources();

/// Parses a test function written in the variable y.
Expr parse_beta(std::string_view source);

}  // namespace ym
