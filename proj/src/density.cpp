#include "bigjumps/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bigjumps/torus.hpp"

namespace bigjumps::densities {

namespace {
void require_open_unit(double x, const char* who) {
  if (!(x > 0 && x < 1)) throw std::domain_error(std::string(who) + ": x must lie in (0, 1)");
}
}  // namespace

ShapeDensity uniform() {
  ShapeDensity h;
  h.name = "uniform";
  h.density = [](double x) {
    require_open_unit(x, "uniform h");
    return 1.0;
  };
  h.mass = [](double a, double b) { return std::max(0.0, std::min(b, 1.0) - std::max(a, 0.0)); };
  return h;
}

ShapeDensity truncated_pareto(double c, double alpha) {
  if (!(c > 0) || !(alpha > 1)) throw std::invalid_argument("truncated_pareto: need c > 0 and alpha > 1");
  ShapeDensity h;
  h.name = "truncated_pareto";
  h.density = [c, alpha](double x) {
    require_open_unit(x, "truncated_pareto h");
    return c * std::pow(x, -alpha - 1.0);
  };
  h.mass = [c, alpha](double a, double b) { return c / alpha * (std::pow(a, -alpha) - std::pow(b, -alpha)); };
  h.atom_at_one = c / alpha;
  return h;
}

ShapeDensity smooth_cutoff(double c, double alpha) {
  if (!(c > 0) || !(alpha > 1)) throw std::invalid_argument("smooth_cutoff: need c > 0 and alpha > 1");
  ShapeDensity h;
  h.name = "smooth_cutoff";
  h.density = [c, alpha](double x) {
    require_open_unit(x, "smooth_cutoff h");
    const double l = -std::log1p(-x);
    return c * alpha / (1.0 - x) * std::pow(l, -alpha - 1.0);
  };
  // Antiderivative -c log(1/(1-x))^{-alpha}; vanishes at x = 1.
  h.mass = [c, alpha](double a, double b) {
    auto tail = [&](double x) { return x >= 1.0 ? 0.0 : c * std::pow(-std::log1p(-x), -alpha); };
    return tail(a) - tail(b);
  };
  return h;
}

ShapeDensity lattice_ball(int d, double beta) {
  if (d < 1 || !(beta > d)) throw std::invalid_argument("lattice_ball: need d >= 1 and beta > d");
  ShapeDensity h;
  h.name = "lattice_ball";
  h.density = [d, beta](double x) { return h_lattice(d, beta, x); };
  h.mass = [d, beta](double a, double b) { return h_lattice_mass(d, beta, a, b); };
  // P(W = n-1) = P(R > sqrt(d) N) ~ n^{-beta/d} (4/d)^{beta/2}.
  h.atom_at_one = lattice_tail_constant(d, beta);
  return h;
}

ShapeDensity tabulated(std::vector<double> xs, std::vector<double> hs, std::string name) {
  if (xs.size() != hs.size() || xs.size() < 2) throw std::invalid_argument("tabulated h: need >= 2 (x, h) pairs");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0 && xs[i] <= 1)) throw std::invalid_argument("tabulated h: x values must lie in [0, 1]");
    if (!(hs[i] >= 0)) throw std::invalid_argument("tabulated h: values must be nonnegative");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw std::invalid_argument("tabulated h: x values must increase");
  }
  ShapeDensity h;
  h.name = std::move(name);
  auto interp = [xs, hs](double x) {
    if (x < xs.front() || x > xs.back()) return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return hs.back();
    const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return hs[i] + t * (hs[i + 1] - hs[i]);
  };
  h.density = [interp](double x) {
    require_open_unit(x, "tabulated h");
    return interp(x);
  };
  // Exact trapezoid integral of the interpolant.
  h.mass = [xs, hs, interp](double a, double b) {
    if (b <= a) return 0.0;
    std::vector<double> pts{a};
    for (double x : xs)
      if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      total += 0.5 * (interp(pts[i]) + interp(pts[i + 1])) * (pts[i + 1] - pts[i]);
    return total;
  };
  return h;
}

ShapeDensity load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tabulated h file: " + path);
  std::vector<double> xs, hs;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0, v = 0;
    if (!(row >> x)) continue;
    if (!(row >> v)) throw std::runtime_error("tabulated h file: malformed row '" + line + "'");
    xs.push_back(x);
    hs.push_back(v);
  }
  return tabulated(std::move(xs), std::move(hs), "tabulated:" + path);
}

}  // namespace bigjumps::densities
