#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace bigjumps {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendre& get(int order);
  static GaussLegendre compute(int order);
};

/// Composite Gauss-Legendre over `panels` equal panels of [a, b].
template <typename F>
double integrate_panels(F&& f, double a, double b, int panels, int order = 8) {
  if (!(b > a) || panels <= 0) return 0.0;
  const auto& rule = GaussLegendre::get(order);
  const double step = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * step;
    const double half = 0.5 * step;
    const double mid = lo + half;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += s * half;
  }
  return total;
}

/// Integral over (a, b) with logarithmic stretching towards both endpoints:
/// on the right half x = b - (b - m) e^{-u}, on the left half x = a + (m - a) e^{-u},
/// truncated where the distance to the endpoint falls below `cutoff`.
/// `panels` panels are used per half in u-space.
double integrate_log_stretched(const std::function<double(double)>& f, double a, double b, int panels,
                               double cutoff);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int levels = 0;
  bool converged = false;
};

/// Doubles the panel count of integrate_log_stretched until two successive
/// estimates differ by at most `tol`. The reported error is the last difference.
/// Stops early, unconverged, once the differences stall at a noise floor.
QuadratureResult integrate_refined(const std::function<double(double)>& f, double a, double b, double tol,
                                   double cutoff, int start_panels = 4, int max_levels = 14);

}  // namespace bigjumps
