#include "ym/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace ym {

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    carry_ += (sum_ - t) + v;
  } else {
    carry_ += (v - t) + sum_;
  }
  sum_ = t;
}

namespace {

// Kronrod abscissae (non-negative half) and weights; every odd index is a
// Gauss 7-point node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

struct WorseFirst {
  bool operator()(const Panel& p, const Panel& q) const noexcept {
    if (p.error != q.error) return p.error < q.error;
    return p.a > q.a;
  }
};

bool splittable(const Panel& p) {
  const double mid = 0.5 * (p.a + p.b);
  // Keep a few ulps of room so child panels stay distinct.
  const double scale = std::max(std::fabs(p.a), std::fabs(p.b));
  return mid > p.a && mid < p.b && (p.b - p.a) > 64.0 * 2.220446049250313e-16 * scale;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, const QuadratureOptions& options) {
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  const double sign = a < b ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<Panel, std::vector<Panel>, WorseFirst> active;
  std::vector<Panel> frozen;
  active.push(gauss_kronrod(f, a, b));
  double total_error = active.top().error;
  std::size_t panels = 1;
  const std::size_t cap = std::max<std::size_t>(options.max_panels, 1);

  while (!active.empty() && total_error > options.abs_tol && panels < cap) {
    Panel worst = active.top();
    active.pop();
    if (!splittable(worst)) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gauss_kronrod(f, worst.a, mid);
    Panel right = gauss_kronrod(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++panels;
    if (total_error <= options.abs_tol) {
      // The running total drifts; confirm against a fresh sum.
      double fresh = 0.0;
      for (const Panel& p : frozen) fresh += p.error;
      auto copy = active;
      while (!copy.empty()) {
        fresh += copy.top().error;
        copy.pop();
      }
      total_error = fresh;
    }
  }

  std::vector<Panel> all = std::move(frozen);
  all.reserve(all.size() + active.size());
  while (!active.empty()) {
    all.push_back(active.top());
    active.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  CompensatedSum value;
  CompensatedSum error;
  for (const Panel& p : all) {
    value.add(p.value);
    error.add(p.error);
  }
  result.value = sign * value.value();
  result.error = error.value();
  result.panels = all.size();
  result.converged = result.error <= options.abs_tol;
  return result;
}

}  // namespace ym
