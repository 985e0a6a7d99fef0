#include "ym/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace ym {

EmpiricalDistribution empirical_pushforward(const PiecewiseFunction& pf, std::size_t n_samples) {
  if (n_samples == 0)
    throw ValidationError(ValidationIssue::precondition, "sample count must be positive");
  const double lo = pf.omega().lo();
  const double step = pf.omega().length() / static_cast<double>(n_samples);
  EmpiricalDistribution out;
  out.values.reserve(n_samples);
  const auto pieces = pf.pieces();
  std::size_t current = 0;
  for (std::size_t j = 0; j < n_samples; ++j) {
    const double x = lo + (static_cast<double>(j) + 0.5) * step;
    // Grid points increase, so the owning piece only moves forward.
    while (current + 1 < pieces.size() && x >= pieces[current + 1].domain().lo()) ++current;
    out.values.push_back(pieces[current].value_at(x));
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

double kolmogorov_distance(const EmpiricalDistribution& emp, const CdfPair& cdf) {
  const auto& v = emp.values;
  const double n = static_cast<double>(v.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const auto [before, at] = cdf(v[i]);
    worst = std::max(worst, std::fabs(static_cast<double>(i) / n - before));
    worst = std::max(worst, std::fabs(static_cast<double>(j) / n - at));
    i = j;
  }
  return worst;
}

double kolmogorov_distance(const EmpiricalDistribution& emp, const YoungMeasure& ym) {
  const auto& atoms = ym.atoms();
  // Running atom prefix sums; sample values arrive in ascending order.
  std::size_t next = 0;
  CompensatedSum below;
  return kolmogorov_distance(emp, [&](double y) {
    while (next < atoms.size() && atoms[next].location < y) below.add(atoms[next++].weight);
    const double strict = below.value();
    const double at_atom =
        next < atoms.size() && atoms[next].location == y ? atoms[next].weight : 0.0;
    const double continuous = continuous_cdf(ym, y);
    return std::pair{strict + continuous, strict + at_atom + continuous};
  });
}

double midpoint_ks_bound(const PiecewiseFunction& pf, std::size_t n_samples) {
  return static_cast<double>(pf.pieces().size()) / static_cast<double>(n_samples) + 1e-9;
}

TensorIntegrals tensor_integrals(const PiecewiseFunction& pf, const Expr& alpha, const Expr& beta,
                                 const QuadratureOptions& options) {
  const double omega_length = pf.omega().length();
  const YoungMeasure ym = compute(pf);
  CompensatedSum alpha_sum;
  CompensatedSum elementary;
  for (const Piece& p : pf.pieces()) {
    const Interval& d = p.domain();
    const QuadratureOptions local{options.abs_tol * d.length(), options.max_panels};
    alpha_sum.add(integrate_adaptive([&](double x) { return evaluate(alpha, x); }, d.lo(), d.hi(),
                                     local)
                      .value);
    elementary.add(integrate_adaptive(
                       [&](double x) { return evaluate(alpha, x) * evaluate(beta, p.value_at(x)); },
                       d.lo(), d.hi(), local)
                       .value);
  }
  return {alpha_sum.value() / omega_length * integrate(ym, beta, options),
          elementary.value() / omega_length};
}

OracleReport run_oracle(const PiecewiseFunction& pf, std::size_t n_samples, double bound) {
  const YoungMeasure ym = compute(pf);
  OracleReport report;
  report.n_samples = n_samples;
  report.ks_distance = kolmogorov_distance(empirical_pushforward(pf, n_samples), ym);
  report.bound = bound < 0.0 ? midpoint_ks_bound(pf, n_samples) : bound;
  report.pass = report.ks_distance <= report.bound;
  return report;
}

}  // namespace ym
