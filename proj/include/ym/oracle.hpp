#pragma once

// Brute-force checks of a computed measure: the empirical pushforward of
// normalized Lebesgue measure on a midpoint grid, its Kolmogorov distance
// to a CDF, and the tensor-product integrals.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "ym/expr.hpp"
#include "ym/measure.hpp"
#include "ym/piecewise.hpp"
#include "ym/quadrature.hpp"

namespace ym {

struct EmpiricalDistribution {
  std::vector<double> values;  // ascending
  std::size_t size() const noexcept { return values.size(); }
};

/// u evaluated at xⱼ = lo + (j + 1/2)|Ω|/N for j = 0..N-1, then sorted.
/// Throws ValidationError(precondition) when n_samples is 0.
EmpiricalDistribution empirical_pushforward(const PiecewiseFunction& pf, std::size_t n_samples);

/// F(y-) and F(y) of a distribution function.
using CdfPair = std::function<std::pair<double, double>(double)>;

/// sup |F_N - F| checked just before and at every distinct sample value.
double kolmogorov_distance(const EmpiricalDistribution& emp, const CdfPair& cdf);
double kolmogorov_distance(const EmpiricalDistribution& emp, const YoungMeasure& ym);

/// Upper bound on the midpoint-grid KS distance of pf's own measure:
/// each piece's sublevel sets are intervals, which the grid counts to
/// within one sample.
double midpoint_ks_bound(const PiecewiseFunction& pf, std::size_t n_samples);

struct TensorIntegrals {
  double quasi_side;       // (1/|Ω|)∫α dx · ∫β dν
  double elementary_side;  // (1/|Ω|)∫α(x)β(u(x)) dx
};

/// alpha is written in x, beta in y.
TensorIntegrals tensor_integrals(const PiecewiseFunction& pf, const Expr& alpha, const Expr& beta,
                                 const QuadratureOptions& options = {});

struct OracleReport {
  std::size_t n_samples = 0;
  double ks_distance = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// KS distance of pf's midpoint sample against compute(pf). A negative
/// bound selects midpoint_ks_bound().
OracleReport run_oracle(const PiecewiseFunction& pf, std::size_t n_samples, double bound = -1.0);

}  // namespace ym
