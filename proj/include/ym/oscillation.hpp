#pragma once

// Fast-oscillating sequences uₙ(x) = u(c·x - (k-1)) on ](k-1)/c, k/c], the
// affine maps between a general (Ω, K) and the unit setting, and builders
// for the five worked example families.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ym/piecewise.hpp"

namespace ym {

struct OscillationSpec {
  PiecewiseFunction generator;  // on ]0,1[ into [0,1]
  int c = 1;
};

/// Throws ValidationError(precondition) unless generator.omega is exactly
/// ]0,1[, generator.k_range ⊆ [0,1] and c >= 1.
void check_oscillation_spec(const OscillationSpec& spec);

/// c copies of the generator squeezed into ]0,1[, each piece expression
/// composed with x ↦ c·x - (k-1) by substitution. The result is validated.
PiecewiseFunction dilate(const OscillationSpec& spec);

/// Maps the domain affinely onto new_omega and the values affinely from
/// pf.k_range onto new_k. Throws ValidationError(precondition) when either
/// value range is a single point.
PiecewiseFunction rescale(const PiecewiseFunction& pf, const Interval& new_omega,
                          const Range& new_k);

enum class ExampleTag { a, b, c, d, e };

std::optional<ExampleTag> parse_example_tag(std::string_view tag);
char to_char(ExampleTag tag);

/// Parameters per family; unset fields take the family default:
///   a: a=1, b=1, n=1     b: n=1     c: n=1
///   d: a=1, b=2, n=1     e: n=2, kmax=1000
struct ExampleParams {
  std::optional<double> a;
  std::optional<double> b;
  std::optional<int> n;
  std::optional<int> k_max;

  /// Applies "key=value" with key in {a, b, n, kmax}; throws
  /// ValidationError(precondition) on unknown keys or malformed values.
  void set(std::string_view assignment);
};

/// Throws ValidationError(precondition) on invalid parameters.
PiecewiseFunction build_example(ExampleTag tag, const ExampleParams& params = {});

/// n·Σ_{k=1..k_max} 1/((n+k-1)(n+k)), summed in exact rational arithmetic
/// and rounded once, so it equals k_max/(n+k_max) bit for bit.
double weight_sum(std::int64_t n, std::int64_t k_max);

}  // namespace ym
