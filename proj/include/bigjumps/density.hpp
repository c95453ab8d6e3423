#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bigjumps {

/// Shape density h on (0, 1) describing W/n near the cut-off scale, plus the
/// optional pieces the integrators can exploit.
struct ShapeDensity {
  std::string name;
  std::function<double(double)> density;
  // Closed-form integral over [a, b] ⊂ (0, 1]; empty when unknown.
  std::function<double(double, double)> mass;
  // Limit of n^alpha P(W = cut-off); zero for laws without an atom there.
  double atom_at_one = 0.0;

  double operator()(double x) const { return density(x); }
  bool has_mass() const { return static_cast<bool>(mass); }
};

namespace densities {

ShapeDensity uniform();
/// h(x) = c x^{-alpha-1}; atom c/alpha at the cut-off (W ∧ n).
ShapeDensity truncated_pareto(double c, double alpha);
/// h(x) = c alpha (1-x)^{-1} log(1/(1-x))^{-alpha-1}.
ShapeDensity smooth_cutoff(double c, double alpha);
ShapeDensity lattice_ball(int d, double beta);
/// Piecewise-linear interpolation of (x, h) samples, zero outside the table.
ShapeDensity tabulated(std::vector<double> xs, std::vector<double> hs, std::string name = "tabulated");
ShapeDensity load_tabulated(const std::string& path);

}  // namespace densities
}  // namespace bigjumps
