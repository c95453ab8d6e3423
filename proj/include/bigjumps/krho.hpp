#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bigjumps/density.hpp"
#include "bigjumps/quadrature.hpp"

namespace bigjumps {

enum class KrhoMethod { closed_form, grid, monte_carlo };

std::string to_string(KrhoMethod method);
KrhoMethod krho_method_from_string(const std::string& name);

/// The condensation constant. A diverged result carries value = +inf.
struct KrhoResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
  KrhoMethod method = KrhoMethod::closed_form;
  bool diverged = false;
  std::string note;
};

struct KrhoOptions {
  std::optional<KrhoMethod> method;  // default: closed form for k = 1, grid for k <= 3, else Monte Carlo
  std::uint64_t seed = 1;
  long long mc_samples = 0;      // 0: sized from a pilot run to meet tol, capped by mc_max_samples
  long long mc_max_samples = 20'000'000;
  double cutoff = 1e-12;         // h is never evaluated closer than this to 0 or 1
};

/// K_rho = h(rho) for k = 1, otherwise the (k-1)-fold integral of
/// h(x_1)...h(x_{k-1}) h(rho - sum x) over the slab where every argument is in (0, 1).
KrhoResult krho_eval(const ShapeDensity& h, double rho, int k, double tol, const KrhoOptions& options = {});

/// Unnormalized density of the first k-1 limiting jump sizes; zero off the support.
double jump_density(const ShapeDensity& h, double rho, int k, std::span<const double> x);

/// Integral of jump_density over the box prod [lo_i, hi_i] of the first k-1
/// coordinates, by the same iterated stretched quadrature as the grid method.
QuadratureResult slab_integral(const ShapeDensity& h, double rho, int k,
                               std::span<const std::pair<double, double>> box, double tol,
                               double cutoff = 1e-12);

/// Constant of the k-fold window probability when W/n also carries an atom of
/// mass h.atom_at_one at the cut-off: sum_j C(k, j) a^j K^{(k-j)}_{rho-j}.
KrhoResult krho_eval_with_atom(const ShapeDensity& h, double rho, int k, double tol,
                               const KrhoOptions& options = {});

/// Draws from the normalized limit law of (X_1, ..., X_k) by rejection from a
/// uniform box; requires h to be bounded on the support.
std::vector<std::vector<double>> sample_limit_jumps(const ShapeDensity& h, double rho, int k, std::size_t count,
                                                    std::uint64_t seed);

}  // namespace bigjumps
