#pragma once

#include <cstddef>
#include <functional>

namespace ym {

inline constexpr double kDefaultAbsTol = 1e-10;
inline constexpr std::size_t kDefaultMaxPanels = std::size_t{1} << 20;

struct QuadratureOptions {
  double abs_tol = kDefaultAbsTol;
  std::size_t max_panels = kDefaultMaxPanels;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // sum of per-panel |K15 - G7| estimates
  std::size_t panels = 0;
  bool converged = false;  // false when the panel cap or double resolution stopped refinement
};

/// Global adaptive Gauss-Kronrod (7/15) quadrature. The rule is open, so f
/// is never evaluated at a or b. The panel with the largest error estimate
/// is bisected until the summed estimate meets abs_tol; ties break on the
/// left endpoint, and the final sum runs left to right with compensation,
/// so the result depends only on f, a, b and the options.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, const QuadratureOptions& options = {});

/// Compensated (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace ym
