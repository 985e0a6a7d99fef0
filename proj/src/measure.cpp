#include "ym/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ym {

YoungMeasure::YoungMeasure(std::vector<Atom> atoms, std::vector<AcSegment> segments,
                           double omega_length, Range k_range)
    : atoms_(std::move(atoms)),
      segments_(std::move(segments)),
      omega_length_(omega_length),
      k_range_(k_range) {}

YoungMeasure compute(const PiecewiseFunction& pf) {
  ensure_valid(pf);
  const double omega_length = pf.omega().length();
  std::map<double, CompensatedSum> merged;
  std::vector<AcSegment> segments;
  for (const Piece& p : pf.pieces()) {
    const double weight = p.domain().length() / omega_length;
    if (p.is_constant()) {
      merged[p.constant_value()].add(weight);
    } else {
      const bool affine = p.monotone_body().derivative.is_closed();
      segments.push_back(AcSegment{p, image(p), weight, affine});
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(merged.size());
  for (const auto& [location, weight] : merged) atoms.push_back({location, weight.value()});
  return YoungMeasure(std::move(atoms), std::move(segments), omega_length, pf.k_range());
}

double total_mass(const YoungMeasure& ym) {
  CompensatedSum sum;
  for (const Atom& a : ym.atoms()) sum.add(a.weight);
  for (const AcSegment& s : ym.segments()) sum.add(s.mass);
  return sum.value();
}

namespace {

bool supports(const YoungMeasure& ym, const AcSegment& seg, double y) {
  return y >= seg.support.lo &&
         (y < seg.support.hi || (y == seg.support.hi && y == ym.k_range().hi));
}

// Measure of {x in piece : u(x) <= y}, normalized by |Ω|.
double segment_cdf(const YoungMeasure& ym, const AcSegment& seg, double y) {
  if (y <= seg.support.lo) return 0.0;
  if (y >= seg.support.hi) return seg.mass;
  if (seg.affine) {
    // The sublevel set is proportional to y - lo whichever way u runs.
    const double t = (y - seg.support.lo) / seg.support.length();
    return std::clamp(t * seg.mass, 0.0, seg.mass);
  }
  const bool increasing = seg.piece.monotone_body().direction == Direction::increasing;
  const Interval& d = seg.piece.domain();
  const double x = invert(seg.piece, y);
  const double below = increasing ? x - d.lo() : d.hi() - x;
  return std::clamp(below / ym.omega_length(), 0.0, seg.mass);
}

// ∫_{lo}^{hi} h(y) |(u⁻¹)'(y)| dy over part of a segment support, in the
// smoothing variable t ∈ (0, 1).
QuadratureResult segment_integral(const AcSegment& seg, double lo, double hi,
                                  const std::function<double(double)>& h, double abs_tol,
                                  std::size_t max_panels) {
  const double w = hi - lo;
  auto integrand = [&](double t) {
    const double s = t * t * (3.0 - 2.0 * t);
    const double ds = 6.0 * t * (1.0 - t);
    const double y = std::min(lo + w * s, hi);
    double density = 0.0;
    try {
      density = inverse_derivative_magnitude(seg.piece, y);
    } catch (const SingularityError&) {
      // Only reachable when y has rounded onto a singular support end,
      // where ds vanishes faster than the density grows.
      if (y > seg.support.lo && y < seg.support.hi) throw;
      return 0.0;
    } catch (const DomainError&) {
      if (y > seg.support.lo && y < seg.support.hi) throw;
      return 0.0;
    }
    return h(y) * density * w * ds;
  };
  return integrate_adaptive(integrand, 0.0, 1.0, {abs_tol, max_panels});
}

}  // namespace

double continuous_cdf(const YoungMeasure& ym, double y) {
  CompensatedSum sum;
  for (const AcSegment& seg : ym.segments()) sum.add(segment_cdf(ym, seg, y));
  return sum.value();
}

double density_at(const YoungMeasure& ym, double y) {
  CompensatedSum sum;
  for (const AcSegment& seg : ym.segments()) {
    if (supports(ym, seg, y)) sum.add(inverse_derivative_magnitude(seg.piece, y));
  }
  return sum.value() / ym.omega_length();
}

double cdf(const YoungMeasure& ym, double y) {
  CompensatedSum sum;
  for (const Atom& a : ym.atoms()) {
    if (a.location > y) break;
    sum.add(a.weight);
  }
  sum.add(continuous_cdf(ym, y));
  return sum.value();
}

double cdf_before(const YoungMeasure& ym, double y) {
  CompensatedSum sum;
  for (const Atom& a : ym.atoms()) {
    if (a.location >= y) break;
    sum.add(a.weight);
  }
  sum.add(continuous_cdf(ym, y));
  return sum.value();
}

QuadratureResult cdf_by_quadrature(const YoungMeasure& ym, double y,
                                   const QuadratureOptions& options) {
  QuadratureResult out;
  out.converged = true;
  CompensatedSum value;
  CompensatedSum error;
  for (const Atom& a : ym.atoms()) {
    if (a.location > y) break;
    value.add(a.weight);
  }
  const auto one = [](double) { return 1.0; };
  for (const AcSegment& seg : ym.segments()) {
    if (y <= seg.support.lo) continue;
    const double upper = std::min(y, seg.support.hi);
    const double tol = options.abs_tol * seg.mass * ym.omega_length();
    const QuadratureResult r =
        segment_integral(seg, seg.support.lo, upper, one, tol, options.max_panels);
    value.add(r.value / ym.omega_length());
    error.add(r.error / ym.omega_length());
    out.panels += r.panels;
    out.converged = out.converged && r.converged;
  }
  out.value = value.value();
  out.error = error.value();
  return out;
}

double integrate(const YoungMeasure& ym, const Expr& beta, const QuadratureOptions& options) {
  CompensatedSum sum;
  for (const Atom& a : ym.atoms()) sum.add(a.weight * evaluate(beta, a.location));
  const auto h = [&beta](double y) { return evaluate(beta, y); };
  for (const AcSegment& seg : ym.segments()) {
    const double tol = options.abs_tol * seg.mass * ym.omega_length();
    const QuadratureResult r =
        segment_integral(seg, seg.support.lo, seg.support.hi, h, tol, options.max_panels);
    sum.add(r.value / ym.omega_length());
  }
  return sum.value();
}

double pushforward_integral(const PiecewiseFunction& pf, const Expr& beta,
                            const QuadratureOptions& options) {
  CompensatedSum sum;
  for (const Piece& p : pf.pieces()) {
    const Interval& d = p.domain();
    if (p.is_constant()) {
      sum.add(evaluate(beta, p.constant_value()) * d.length());
      continue;
    }
    const Expr& u = p.monotone_body().expr;
    const QuadratureResult r = integrate_adaptive(
        [&](double x) { return evaluate(beta, evaluate(u, x)); }, d.lo(), d.hi(),
        {options.abs_tol * d.length(), options.max_panels});
    sum.add(r.value);
  }
  return sum.value() / pf.omega().length();
}

VerificationReport verify_identity(const PiecewiseFunction& pf, std::span<const Expr> betas,
                                   double tolerance, const IdentityOptions& options) {
  const YoungMeasure ym = compute(pf);
  VerificationReport report;
  report.tolerance = tolerance;
  for (const Expr& beta : betas) {
    IdentityCheck check;
    check.beta = render(beta, "y");
    check.lhs = integrate(ym, beta, options.quadrature) * (1.0 + options.perturb);
    check.rhs = pushforward_integral(pf, beta, options.quadrature);
    check.residual = std::fabs(check.lhs - check.rhs);
    report.max_residual = std::max(report.max_residual, check.residual);
    report.checks.push_back(std::move(check));
  }
  report.pass = report.max_residual <= tolerance;
  return report;
}

Expr parse_beta(std::string_view source) { return parse(source, ParseOptions{.variable = "y"}); }

std::vector<Expr> standard_beta_family() {
  std::vector<Expr> out;
  for (const char* s : {"1", "y", "y^2", "y^3", "sin(y)", "cos(y)", "exp(y)"})
    out.push_back(parse_beta(s));
  return out;
}

std::vector<std::string> default_beta_sources() {
  return {"1", "y", "y^2", "y^3", "sin(y)", "exp(y)"};
}

}  // namespace ym
