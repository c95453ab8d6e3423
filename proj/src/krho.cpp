#include "bigjumps/krho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bigjumps/random.hpp"

namespace bigjumps {

std::string to_string(KrhoMethod method) {
  switch (method) {
    case KrhoMethod::closed_form: return "closed_form";
    case KrhoMethod::grid: return "grid";
    case KrhoMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

KrhoMethod krho_method_from_string(const std::string& name) {
  if (name == "closed_form") return KrhoMethod::closed_form;
  if (name == "grid") return KrhoMethod::grid;
  if (name == "monte_carlo" || name == "mc") return KrhoMethod::monte_carlo;
  throw std::invalid_argument("unknown K_rho method '" + name + "'");
}

namespace {

void check_window(double rho, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(rho > k - 1 && rho < k))
    throw std::domain_error("rho must satisfy k-1 < rho < k (rho = " + std::to_string(rho) +
                            ", k = " + std::to_string(k) + ")");
}

// Iterated integral over x_0..x_{k-2} with per-coordinate boxes; the last
// argument rho - sum is constrained to (0, 1).
class Slab {
 public:
  Slab(const ShapeDensity& h, int k, std::span<const std::pair<double, double>> box, double tol, double cutoff,
       bool corrections)
      : h_(h), k_(k), box_(box.begin(), box.end()), tol_(tol), cutoff_(cutoff), corrections_(corrections) {
    const int free = k - 1;
    min_rest_.assign(static_cast<std::size_t>(free), 0.0);
    max_rest_.assign(static_cast<std::size_t>(free), 1.0);
    for (int j = free - 2; j >= 0; --j) {
      min_rest_[static_cast<std::size_t>(j)] = min_rest_[static_cast<std::size_t>(j + 1)] + box_[static_cast<std::size_t>(j + 1)].first;
      max_rest_[static_cast<std::size_t>(j)] = max_rest_[static_cast<std::size_t>(j + 1)] + box_[static_cast<std::size_t>(j + 1)].second;
    }
  }

  QuadratureResult top(double rho) const { return level(0, rho); }

 private:
  double h_safe(double x) const { return x > cutoff_ && x < 1.0 - cutoff_ ? h_(x) : 0.0; }

  double value(int j, double t) const {
    if (j == k_ - 1) return h_safe(t);
    return level(j, t).value;
  }

  QuadratureResult level(int j, double t) const {
    const auto& [blo, bhi] = box_[static_cast<std::size_t>(j)];
    const double lo_partner = t - max_rest_[static_cast<std::size_t>(j)];
    const double hi_partner = t - min_rest_[static_cast<std::size_t>(j)];
    const double lo = std::max({blo, lo_partner, 0.0});
    const double hi = std::min({bhi, hi_partner, 1.0});
    QuadratureResult res;
    if (!(hi > lo + 2 * cutoff_)) {
      res.converged = true;
      return res;
    }
    const double level_tol = j == 0 ? tol_ : tol_ * 0.05;
    res = integrate_refined([&](double x) { return h_safe(x) * value(j + 1, t - x); }, lo, hi, level_tol, cutoff_);
    if (corrections_ && h_.has_mass()) {
      const double edge_mass = h_.mass(1.0 - cutoff_, 1.0);
      // x_j -> 1: h(x_j) may blow up, the rest is evaluated at the edge.
      if (hi >= 1.0) res.value += edge_mass * value(j + 1, t - 1.0);
      // Partner h(t - x) -> h(1) at the lower edge of the innermost level.
      if (j == k_ - 2 && lo == lo_partner && lo > 0) res.value += h_safe(lo) * edge_mass;
    }
    return res;
  }

  const ShapeDensity& h_;
  int k_;
  std::vector<std::pair<double, double>> box_;
  std::vector<double> min_rest_, max_rest_;
  double tol_, cutoff_;
  bool corrections_;
};

std::vector<std::pair<double, double>> unit_box(int k) {
  return std::vector<std::pair<double, double>>(static_cast<std::size_t>(std::max(0, k - 1)), {0.0, 1.0});
}

// Piecewise-uniform approximation q of h / M on (lo, 1), refined towards 1.
class CellProposal {
 public:
  CellProposal(const ShapeDensity& h, double lo, double cutoff, int cells = 4096) {
    const double span = 1.0 - lo;
    const double umax = std::log(span / cutoff);
    nodes_.push_back(lo);
    for (int i = 1; i <= cells; ++i) nodes_.push_back(1.0 - span * std::exp(-umax * i / cells));
    nodes_.push_back(1.0);
    // Uniform spacing near lo as well, so the first cells are not too wide.
    for (int i = 1; i < 256; ++i) nodes_.push_back(lo + span * 0.5 * i / 256.0);
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    mass_.resize(nodes_.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      const double a = nodes_[i], b = nodes_[i + 1];
      if (h.has_mass()) {
        mass_[i] = h.mass(a, b);
      } else if (b < 1.0 - cutoff / 2) {
        mass_[i] = integrate_panels([&](double x) { return h(x); }, a, b, 1, 8);
      } else {
        mass_[i] = 0.0;
      }
      mass_[i] = std::max(0.0, mass_[i]);
    }
    cum_.resize(mass_.size());
    std::partial_sum(mass_.begin(), mass_.end(), cum_.begin());
    total_ = cum_.back();
    if (!(total_ > 0) || !std::isfinite(total_))
      throw std::domain_error("K_rho Monte Carlo: h has no usable mass on the support");
  }

  double total() const { return total_; }

  double draw(double u, Stream& rng) const {
    const double target = u * total_;
    auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
    std::size_t i = std::min(static_cast<std::size_t>(it - cum_.begin()), mass_.size() - 1);
    while (mass_[i] <= 0 && i > 0) --i;
    return nodes_[i] + rng.uniform() * (nodes_[i + 1] - nodes_[i]);
  }

  double density(double x) const {
    if (x <= nodes_.front() || x >= nodes_.back()) return 0.0;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const auto i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return mass_[i] / (total_ * (nodes_[i + 1] - nodes_[i]));
  }

 private:
  std::vector<double> nodes_, mass_, cum_;
  double total_ = 0.0;
};

struct Moments {
  double sum = 0.0, sq = 0.0;
  long long count = 0;
};

KrhoResult krho_monte_carlo(const ShapeDensity& h, double rho, int k, double tol, const KrhoOptions& options) {
  const double lo = std::max(0.0, rho - (k - 1));
  const CellProposal q(h, lo, options.cutoff);
  const int strata = 64;
  auto h_safe = [&](double x) { return x > options.cutoff && x < 1.0 - options.cutoff ? h(x) : 0.0; };

  auto run = [&](long long samples, std::uint64_t seed) {
    auto parts = run_chunked<Moments>(static_cast<std::size_t>(samples), 1 << 14, 1,
                                      [&](std::size_t chunk, std::size_t b, std::size_t e) {
                                        Stream rng(seed, chunk);
                                        Moments m;
                                        std::vector<double> x(static_cast<std::size_t>(k));
                                        for (std::size_t s = b; s < e; ++s) {
                                          // Round-robin over the determined coordinate, stratified
                                          // first free coordinate.
                                          const auto j = static_cast<std::size_t>(s % static_cast<std::size_t>(k));
                                          const auto stratum = static_cast<double>((s / static_cast<std::size_t>(k)) % strata);
                                          double partial = 0.0;
                                          bool first = true;
                                          for (std::size_t i = 0; i < x.size(); ++i) {
                                            if (i == j) continue;
                                            const double u = first ? (stratum + rng.uniform()) / strata : rng.uniform();
                                            first = false;
                                            x[i] = q.draw(std::min(u, 1.0), rng);
                                            partial += x[i];
                                          }
                                          x[j] = rho - partial;
                                          double w = 0.0;
                                          if (x[j] > options.cutoff && x[j] < 1.0 - options.cutoff) {
                                            double num = 1.0;
                                            for (double xi : x) num *= h_safe(xi);
                                            double mix = 0.0;
                                            for (std::size_t jj = 0; jj < x.size(); ++jj) {
                                              double prod = 1.0;
                                              for (std::size_t i = 0; i < x.size(); ++i)
                                                if (i != jj) prod *= q.density(x[i]);
                                              mix += prod;
                                            }
                                            mix /= static_cast<double>(k);
                                            if (mix > 0) w = num / mix;
                                          }
                                          m.sum += w;
                                          m.sq += w * w;
                                          ++m.count;
                                        }
                                        return m;
                                      });
    Moments total;
    for (const auto& p : parts) {
      total.sum += p.sum;
      total.sq += p.sq;
      total.count += p.count;
    }
    return total;
  };

  auto summarize = [](const Moments& m) {
    const double mean = m.sum / static_cast<double>(m.count);
    const double var = std::max(0.0, m.sq / static_cast<double>(m.count) - mean * mean);
    return std::pair{mean, std::sqrt(var / static_cast<double>(m.count))};
  };

  long long samples = options.mc_samples;
  if (samples <= 0) {
    const long long pilot = 100'000;
    const auto [mean, se] = summarize(run(pilot, options.seed ^ 0xa5a5a5a5ULL));
    (void)mean;
    const double sigma = se * std::sqrt(static_cast<double>(pilot));
    const double needed = std::pow(3.0 * sigma / tol, 2.0);
    samples = static_cast<long long>(std::clamp(needed, static_cast<double>(pilot),
                                                static_cast<double>(options.mc_max_samples)));
  }
  const auto [mean, se] = summarize(run(samples, options.seed));
  KrhoResult res;
  res.method = KrhoMethod::monte_carlo;
  res.value = mean;
  res.abs_error_bound = 3.0 * se;
  res.note = "importance sampling, " + std::to_string(samples) + " samples; bound is 3 standard errors";
  return res;
}

struct EdgeCheck {
  bool diverged = false;
  std::string note;
  double tail_mass = 0.0;  // mass of h in (1 - cutoff, 1), or a proxy when h has no closed form
};

// K_rho is finite iff h is integrable up to 1 on (rho - k + 1, 1); below 1 the
// arguments stay away from 0. With a closed-form mass this is decided exactly;
// otherwise from the decay of the mass in bands (1 - 10^{-2i}, 1 - 10^{-2i-2}).
EdgeCheck check_edge(const ShapeDensity& h, int k, double rho, double cutoff) {
  EdgeCheck e;
  const double lo = std::max(0.0, rho - (k - 1));
  if (h.has_mass()) {
    const double m = h.mass(std::max(lo, 0.5), 1.0);
    e.diverged = !std::isfinite(m);
    if (e.diverged) e.note = "h is not integrable near 1";
    else e.tail_mass = h.mass(1.0 - cutoff, 1.0);
    return e;
  }
  std::vector<double> bands;
  for (int i = 1; i <= 6; ++i) {
    const double a = 1.0 - std::pow(10.0, -2.0 * (i - 1)) * (i == 1 ? 1.0 - std::max(lo, 0.5) : 1.0);
    const double b = 1.0 - std::pow(10.0, -2.0 * i);
    bands.push_back(integrate_refined([&](double x) { return h(x); }, a, b, 1e-8, 0.0).value);
    if (!std::isfinite(bands.back())) {
      e.diverged = true;
      e.note = "h is not finite near 1";
      return e;
    }
  }
  bool flat = true;
  for (std::size_t i = 1; i + 1 < bands.size(); ++i) flat = flat && bands[i + 1] >= 0.9 * bands[i] && bands[i] > 0;
  e.diverged = flat;
  if (flat) e.note = "mass of h in successive bands towards 1 does not decay (last band " + std::to_string(bands.back()) + ")";
  // Proxy for the mass beyond the cut-off: the last band, rescaled to the cut-off decade.
  e.tail_mass = bands.back() * std::log(1.0 / cutoff) / std::log(1e12);
  return e;
}

}  // namespace

KrhoResult krho_eval(const ShapeDensity& h, double rho, int k, double tol, const KrhoOptions& options) {
  check_window(rho, k);
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  KrhoResult res;
  if (k == 1) {
    res.method = KrhoMethod::closed_form;
    res.value = h(rho);
    res.diverged = !std::isfinite(res.value);
    if (res.diverged) res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  const KrhoMethod method = options.method.value_or(k <= 3 ? KrhoMethod::grid : KrhoMethod::monte_carlo);
  if (method == KrhoMethod::closed_form) throw std::invalid_argument("closed form K_rho exists only for k = 1");
  if (method == KrhoMethod::grid && k > 3) throw std::invalid_argument("grid K_rho is limited to k <= 3");

  const auto edge = check_edge(h, k, rho, options.cutoff);
  if (edge.diverged) {
    res.method = method;
    res.value = std::numeric_limits<double>::infinity();
    res.abs_error_bound = std::numeric_limits<double>::infinity();
    res.diverged = true;
    res.note = edge.note;
    return res;
  }

  if (method == KrhoMethod::monte_carlo) {
    res = krho_monte_carlo(h, rho, k, tol, options);
    // Configurations with one coordinate inside the cut-off: k choices, the
    // others form a (k-1)-fold slab at rho - 1.
    if (edge.tail_mass > 0) {
      KrhoOptions inner = options;
      inner.method.reset();
      const double rest = k == 2 ? h(rho - 1.0) : krho_eval(h, rho - 1.0, k - 1, std::max(tol, 1e-6), inner).value;
      const double edge_term = k * edge.tail_mass * rest;
      if (h.has_mass())
        res.value += edge_term;
      else
        res.abs_error_bound += edge_term;
    }
    return res;
  }

  const auto box = unit_box(k);
  Slab slab(h, k, box, tol, options.cutoff, true);
  const auto q = slab.top(rho);
  res.method = KrhoMethod::grid;
  res.value = q.value;
  res.abs_error_bound = q.abs_error;
  if (!q.converged) res.note = "refinement stopped before reaching tol";
  if (!h.has_mass()) {
    // No analytic edge mass: add the change from the previous cutoff decade.
    Slab coarse(h, k, box, tol, options.cutoff * 100.0, true);
    res.abs_error_bound += std::abs(q.value - coarse.top(rho).value);
  }
  return res;
}

double jump_density(const ShapeDensity& h, double rho, int k, std::span<const double> x) {
  if (static_cast<int>(x.size()) != k - 1) throw std::invalid_argument("jump_density: expected k-1 coordinates");
  double rest = rho;
  double value = 1.0;
  for (double xi : x) {
    if (!(xi > 0 && xi < 1)) return 0.0;
    rest -= xi;
  }
  if (!(rest > 0 && rest < 1)) return 0.0;
  for (double xi : x) value *= h(xi);
  return value * h(rest);
}

QuadratureResult slab_integral(const ShapeDensity& h, double rho, int k,
                               std::span<const std::pair<double, double>> box, double tol, double cutoff) {
  if (k < 2) throw std::invalid_argument("slab_integral: k must be >= 2");
  if (static_cast<int>(box.size()) != k - 1) throw std::invalid_argument("slab_integral: box needs k-1 intervals");
  Slab slab(h, k, box, tol, cutoff, true);
  return slab.top(rho);
}

KrhoResult krho_eval_with_atom(const ShapeDensity& h, double rho, int k, double tol, const KrhoOptions& options) {
  check_window(rho, k);
  KrhoResult total;
  total.method = k == 1 ? KrhoMethod::closed_form : KrhoMethod::grid;
  double binom = 1.0;  // C(k, j)
  for (int j = 0; j < k; ++j) {
    const int m = k - j;
    const auto part = krho_eval(h, rho - j, m, tol, options);
    if (part.diverged) return part;
    const double weight = binom * std::pow(h.atom_at_one, j);
    total.value += weight * part.value;
    total.abs_error_bound += weight * part.abs_error_bound;
    if (part.method == KrhoMethod::monte_carlo) total.method = KrhoMethod::monte_carlo;
    binom = binom * (k - j) / (j + 1);
  }
  total.note = "includes atom mass " + std::to_string(h.atom_at_one) + " at the cut-off";
  return total;
}

std::vector<std::vector<double>> sample_limit_jumps(const ShapeDensity& h, double rho, int k, std::size_t count,
                                                    std::uint64_t seed) {
  check_window(rho, k);
  if (k < 2) throw std::invalid_argument("sample_limit_jumps: k must be >= 2");
  const double lo = std::max(0.0, rho - (k - 1));
  const int free = k - 1;
  Stream rng(seed);
  // Envelope from a probe of the box, inflated for safety.
  double envelope = 0.0;
  std::vector<double> x(static_cast<std::size_t>(free));
  const double edge = 1e-9;
  for (int probe = 0; probe < 200'000; ++probe) {
    for (auto& xi : x) {
      const double u = probe < 2 ? (probe == 0 ? 0.0 : 1.0) : rng.uniform();
      xi = lo + edge + u * (1.0 - lo - 2 * edge);
    }
    envelope = std::max(envelope, jump_density(h, rho, k, x));
  }
  if (!std::isfinite(envelope) || envelope <= 0)
    throw std::domain_error("sample_limit_jumps: density is unbounded on the support");
  envelope *= 1.5;
  std::vector<std::vector<double>> out;
  out.reserve(count);
  while (out.size() < count) {
    double rest = rho;
    for (auto& xi : x) {
      xi = lo + rng.uniform() * (1.0 - lo);
      rest -= xi;
    }
    if (!(rest > 0 && rest < 1)) continue;
    if (rng.uniform() * envelope > jump_density(h, rho, k, x)) continue;
    std::vector<double> v(x);
    v.push_back(rest);
    std::shuffle(v.begin(), v.end(), rng.engine());
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace bigjumps
