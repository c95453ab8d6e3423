#include "bigjumps/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bigjumps/quadrature.hpp"
#include "bigjumps/torus.hpp"

namespace bigjumps {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Grid indices are compared with a small relative slack so that values such
// as 0.3 * n / 0.1 land on the intended grid point.
constexpr double kGridSlack = 1e-9;

struct ParetoRow {
  // P(W > w) = scale w^-alpha for w >= x0.
  double scale, alpha, x0, inv_alpha;

  ParetoRow(double scale_, double alpha_)
      : scale(scale_), alpha(alpha_), x0(std::pow(scale_, 1.0 / alpha_)), inv_alpha(1.0 / alpha_) {}

  double survival(double w) const { return w <= x0 ? 1.0 : scale * std::pow(w, -alpha); }
  double draw(Stream& rng) const { return x0 * std::exp(-inv_alpha * std::log(rng.uniform())); }
  double draw_above(double w, Stream& rng) const {
    return std::max(w, x0) * std::pow(rng.uniform(), -inv_alpha);
  }
  // W conditioned on W <= w, w > x0.
  double draw_below(double w, Stream& rng) const {
    const double floor_tail = survival(w);
    const double q = floor_tail + (1.0 - floor_tail) * (1.0 - rng.uniform());
    // q in [floor_tail, 1): W = (scale / q)^{1/alpha}
    return std::clamp(std::pow(scale / std::max(q, floor_tail), inv_alpha), x0, w);
  }
};

struct TruncatedImpl {
  ParetoRow w;
  double n;

  double draw(Stream& rng) const { return std::min(w.draw(rng), n); }
  double tail(double x, bool inclusive) const {
    if (inclusive ? x > n : x >= n) return 0.0;
    return w.survival(x);
  }
  double draw_tail(double x, bool inclusive, Stream& rng) const {
    if (tail(x, inclusive) <= 0) throw std::domain_error("draw_tail: conditioning event has probability zero");
    return std::min(w.draw_above(x, rng), n);
  }
  double draw_body(double x, Stream& rng) const {
    if (x >= n) return draw(rng);
    if (x < w.x0) throw std::domain_error("draw_body: conditioning event has probability zero");
    return w.draw_below(x, rng);
  }
  double mean() const {
    if (n <= w.x0) return n;
    return w.x0 + w.scale * (std::pow(n, 1.0 - w.alpha) - std::pow(w.x0, 1.0 - w.alpha)) / (1.0 - w.alpha);
  }
};

struct SmoothImpl {
  ParetoRow w;
  double n;

  double map(double v) const { return -n * std::expm1(-v / n); }
  double preimage(double x) const { return x >= n ? std::numeric_limits<double>::infinity() : -n * std::log1p(-x / n); }
  double draw(Stream& rng) const { return map(w.draw(rng)); }
  double tail(double x, bool) const {
    if (x < 0) return 1.0;
    if (x >= n) return 0.0;
    return w.survival(preimage(x));
  }
  double draw_tail(double x, bool inclusive, Stream& rng) const {
    if (tail(x, inclusive) <= 0) throw std::domain_error("draw_tail: conditioning event has probability zero");
    return map(w.draw_above(std::max(0.0, preimage(x)), rng));
  }
  double draw_body(double x, Stream& rng) const {
    if (x >= n) return draw(rng);
    const double v = preimage(x);
    if (v < w.x0) throw std::domain_error("draw_body: conditioning event has probability zero");
    return map(w.draw_below(v, rng));
  }
  double mean() const {
    // E W^(n) = ∫ P(W > v) e^{-v/n} dv; substitute v = x0 e^t.
    const double floor_part = map(w.x0);
    const double top = std::log(80.0 * n / w.x0) + 1.0;
    if (top <= 0) return floor_part;
    auto integrand = [&](double t) {
      const double v = w.x0 * std::exp(t);
      return w.survival(v) * std::exp(-v / n) * v;
    };
    return floor_part + integrate_panels(integrand, 0.0, top, 400, 10);
  }
};

struct LatticeImpl {
  int d;
  double beta;
  long N;
  ShellTable shells;

  double count(double R) const { return static_cast<double>(shells.count_below(R)); }
  static double survival(double beta, double r) { return r <= 1.0 ? 1.0 : std::pow(r, -beta); }
  // W >= rank  <=>  R > radius_of_rank(rank)
  long rank_for(double x, bool inclusive) const {
    return inclusive ? static_cast<long>(std::ceil(x - kGridSlack)) : static_cast<long>(std::floor(x + kGridSlack)) + 1;
  }
  double draw(Stream& rng) const { return count(sample_radius(beta, rng)); }
  double tail(double x, bool inclusive) const {
    const long rank = rank_for(x, inclusive);
    if (rank <= 0) return 1.0;
    if (rank > shells.max_count()) return 0.0;
    return survival(beta, shells.radius_of_rank(rank));
  }
  double draw_tail(double x, bool inclusive, Stream& rng) const {
    const long rank = rank_for(x, inclusive);
    if (rank > shells.max_count()) throw std::domain_error("draw_tail: conditioning event has probability zero");
    const double r = rank <= 0 ? 1.0 : std::max(1.0, shells.radius_of_rank(rank));
    const double R = r * std::pow(rng.uniform(), -1.0 / beta);
    return count(R);
  }
  double draw_body(double x, Stream& rng) const {
    const long rank = rank_for(x, false);
    if (rank > shells.max_count()) return draw(rng);
    const double r = shells.radius_of_rank(rank);
    if (r <= 1.0) throw std::domain_error("draw_body: conditioning event has probability zero");
    ParetoRow radius(1.0, beta);
    return count(radius.draw_below(r, rng));
  }
  double mean() const { return shells.mean_count(beta); }
};

struct GridImpl {
  std::vector<double> pmf;
  std::vector<double> cum;
  // Walker alias table for O(1) unconditional draws.
  std::vector<double> keep;
  std::vector<long> alias;
  double step;
  long last_positive;

  void build_alias() {
    const std::size_t m = pmf.size();
    keep.assign(m, 1.0);
    alias.resize(m);
    std::vector<double> scaled(m);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < m; ++i) {
      alias[i] = static_cast<long>(i);
      scaled[i] = pmf[i] * static_cast<double>(m);
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back(), l = large.back();
      small.pop_back();
      keep[s] = scaled[s];
      alias[s] = static_cast<long>(l);
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    // Leftovers are 1 up to rounding; a zero-mass cell must never be returned.
    for (auto i : small) {
      keep[i] = 1.0;
      if (pmf[i] <= 0) {
        keep[i] = 0.0;
        alias[i] = last_positive;
      }
    }
  }

  long index_above(double x, bool inclusive) const {
    // Smallest index whose value is > x (or >= x).
    const double pos = x / step;
    return inclusive ? static_cast<long>(std::ceil(pos - kGridSlack)) : static_cast<long>(std::floor(pos + kGridSlack)) + 1;
  }
  double mass_from(long i) const {
    if (i <= 0) return 1.0;
    if (i >= static_cast<long>(pmf.size())) return 0.0;
    return 1.0 - cum[static_cast<std::size_t>(i - 1)];
  }
  long index_for(double u) const {
    auto it = std::lower_bound(cum.begin(), cum.end(), u);
    long i = static_cast<long>(it - cum.begin());
    return std::min(i, last_positive);
  }
  long draw_index(Stream& rng) const {
    const double x = (1.0 - rng.uniform()) * static_cast<double>(pmf.size());
    const auto i = std::min(static_cast<std::size_t>(x), pmf.size() - 1);
    return x - static_cast<double>(i) < keep[i] ? static_cast<long>(i) : alias[i];
  }
  double draw(Stream& rng) const { return static_cast<double>(draw_index(rng)) * step; }
  double tail(double x, bool inclusive) const { return mass_from(index_above(x, inclusive)); }
  double draw_tail(double x, bool inclusive, Stream& rng) const {
    const long i0 = std::max(0L, index_above(x, inclusive));
    const double mass = mass_from(i0);
    if (mass <= 0) throw std::domain_error("draw_tail: conditioning event has probability zero");
    const double base = i0 == 0 ? 0.0 : cum[static_cast<std::size_t>(i0 - 1)];
    long i = index_for(base + mass * rng.uniform());
    while (i < i0 || pmf[static_cast<std::size_t>(i)] <= 0) ++i;
    return static_cast<double>(i) * step;
  }
  double draw_body(double x, Stream& rng) const {
    const long top = index_above(x, false) - 1;  // largest index with value <= x
    if (top < 0) throw std::domain_error("draw_body: conditioning event has probability zero");
    const double mass = cum[static_cast<std::size_t>(std::min<long>(top, static_cast<long>(cum.size()) - 1))];
    if (mass <= 0) throw std::domain_error("draw_body: conditioning event has probability zero");
    return static_cast<double>(std::min(index_for(mass * rng.uniform()), top)) * step;
  }
  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) m += pmf[i] * static_cast<double>(i) * step;
    return m;
  }
};

long lattice_half_width(int d, long n) {
  const double side = std::round(std::pow(static_cast<double>(n), 1.0 / d));
  long L = static_cast<long>(side);
  for (long cand : {L - 1, L, L + 1}) {
    if (cand < 3 || cand % 2 == 0) continue;
    long total = 1;
    for (int i = 0; i < d && total <= n; ++i) total *= cand;
    if (total == n) return (cand - 1) / 2;
  }
  throw std::invalid_argument("LatticeBall: n = " + std::to_string(n) + " is not of the form (2N+1)^d with N >= 1");
}

}  // namespace

// --- SchemeSpec -------------------------------------------------------------

SchemeSpec SchemeSpec::truncated_pareto(double c, double alpha) {
  SchemeSpec s{TruncatedPareto{c, alpha}, alpha, std::nullopt};
  s.validate();
  return s;
}

SchemeSpec SchemeSpec::smooth_cutoff(double c, double alpha) {
  SchemeSpec s{SmoothCutoff{c, alpha}, alpha, std::nullopt};
  s.validate();
  return s;
}

SchemeSpec SchemeSpec::lattice_ball(int d, double beta) {
  SchemeSpec s{LatticeBall{d, beta}, beta / d, std::nullopt};
  s.validate();
  return s;
}

SchemeSpec SchemeSpec::discrete_grid(std::vector<double> pmf, double alpha) {
  SchemeSpec s{DiscreteGrid{std::move(pmf)}, alpha, std::nullopt};
  s.validate();
  return s;
}

void SchemeSpec::validate() const {
  std::visit(Overloaded{
                 [&](const TruncatedPareto& p) {
                   if (!(p.c > 0)) throw std::invalid_argument("TruncatedPareto: c must be positive");
                   if (!(p.alpha > 1)) throw std::invalid_argument("TruncatedPareto: alpha must exceed 1");
                   if (alpha != p.alpha) throw std::invalid_argument("TruncatedPareto: alpha mismatch");
                 },
                 [&](const SmoothCutoff& p) {
                   if (!(p.c > 0)) throw std::invalid_argument("SmoothCutoff: c must be positive");
                   if (!(p.alpha > 1)) throw std::invalid_argument("SmoothCutoff: alpha must exceed 1");
                   if (alpha != p.alpha) throw std::invalid_argument("SmoothCutoff: alpha mismatch");
                 },
                 [&](const LatticeBall& p) {
                   if (p.d < 1) throw std::invalid_argument("LatticeBall: d must be >= 1");
                   if (!(p.beta > p.d)) throw std::invalid_argument("LatticeBall: beta must exceed d");
                 },
                 [&](const DiscreteGrid& g) {
                   if (g.pmf.size() < 2) throw std::invalid_argument("DiscreteGrid: need at least two support points");
                   double total = 0.0;
                   for (double p : g.pmf) {
                     if (!(p >= 0)) throw std::invalid_argument("DiscreteGrid: pmf entries must be nonnegative");
                     total += p;
                   }
                   if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("DiscreteGrid: pmf must sum to 1");
                   if (!std::isnan(alpha) && !(alpha > 1))
                     throw std::invalid_argument("DiscreteGrid: alpha, when given, must exceed 1");
                 },
             },
             shape);
}

std::string SchemeSpec::kind() const {
  return std::visit(Overloaded{
                        [](const TruncatedPareto&) { return std::string("truncated_pareto"); },
                        [](const SmoothCutoff&) { return std::string("smooth_cutoff"); },
                        [](const LatticeBall&) { return std::string("lattice_ball"); },
                        [](const DiscreteGrid&) { return std::string("discrete_grid"); },
                    },
                    shape);
}

ShapeDensity SchemeSpec::shape_density() const {
  return std::visit(Overloaded{
                        [](const TruncatedPareto& p) { return densities::truncated_pareto(p.c, p.alpha); },
                        [](const SmoothCutoff& p) { return densities::smooth_cutoff(p.c, p.alpha); },
                        [](const LatticeBall& p) { return densities::lattice_ball(p.d, p.beta); },
                        [](const DiscreteGrid&) -> ShapeDensity {
                          throw std::domain_error("DiscreteGrid schemes have no shape density h");
                        },
                    },
                    shape);
}

double SchemeSpec::require_alpha() const {
  if (std::isnan(alpha)) throw std::invalid_argument("this operation needs the scheme's tail index alpha");
  return alpha;
}

// --- RowSampler -------------------------------------------------------------

struct RowSampler::Impl {
  std::variant<TruncatedImpl, SmoothImpl, LatticeImpl, GridImpl> v;
};

RowSampler::RowSampler(const SchemeSpec& spec, long n) : spec_(spec), n_(n) {
  if (n <= 0) throw std::invalid_argument("scheme level n must be positive");
  spec_.validate();
  const double nd = static_cast<double>(n);
  impl_ = std::make_unique<Impl>(std::visit(
      Overloaded{
          [&](const TruncatedPareto& p) { return Impl{TruncatedImpl{ParetoRow(p.c / p.alpha, p.alpha), nd}}; },
          [&](const SmoothCutoff& p) { return Impl{SmoothImpl{ParetoRow(p.c, p.alpha), nd}}; },
          [&](const LatticeBall& p) {
            const long N = lattice_half_width(p.d, n);
            return Impl{LatticeImpl{p.d, p.beta, N, ShellTable(p.d, N)}};
          },
          [&](const DiscreteGrid& g) {
            GridImpl grid;
            grid.pmf = g.pmf;
            grid.cum.resize(g.pmf.size());
            std::partial_sum(g.pmf.begin(), g.pmf.end(), grid.cum.begin());
            grid.step = nd / static_cast<double>(g.pmf.size() - 1);
            grid.last_positive = 0;
            for (std::size_t i = 0; i < g.pmf.size(); ++i)
              if (g.pmf[i] > 0) grid.last_positive = static_cast<long>(i);
            grid.build_alias();
            return Impl{std::move(grid)};
          },
      },
      spec_.shape));
}

RowSampler::~RowSampler() = default;
RowSampler::RowSampler(RowSampler&&) noexcept = default;
RowSampler& RowSampler::operator=(RowSampler&&) noexcept = default;

double RowSampler::draw(Stream& rng) const {
  return std::visit([&](const auto& s) { return s.draw(rng); }, impl_->v);
}

double RowSampler::draw_sum(long count, Stream& rng) const {
  return std::visit(
      [&](const auto& s) {
        double total = 0.0;
        for (long i = 0; i < count; ++i) total += s.draw(rng);
        return total;
      },
      impl_->v);
}

void RowSampler::fill(std::span<double> out, Stream& rng) const {
  std::visit(
      [&](const auto& s) {
        for (double& x : out) x = s.draw(rng);
      },
      impl_->v);
}

double RowSampler::tail(double x, bool inclusive) const {
  return std::visit([&](const auto& s) { return s.tail(x, inclusive); }, impl_->v);
}

double RowSampler::draw_tail(double x, bool inclusive, Stream& rng) const {
  return std::visit([&](const auto& s) { return s.draw_tail(x, inclusive, rng); }, impl_->v);
}

double RowSampler::draw_body(double x, Stream& rng) const {
  return std::visit([&](const auto& s) { return s.draw_body(x, rng); }, impl_->v);
}

std::optional<double> RowSampler::exact_mean() const {
  return std::visit([&](const auto& s) -> std::optional<double> { return s.mean(); }, impl_->v);
}

namespace {
const GridImpl& grid_of(const std::variant<TruncatedImpl, SmoothImpl, LatticeImpl, GridImpl>& v) {
  const auto* g = std::get_if<GridImpl>(&v);
  if (!g) throw std::domain_error("grid operation on a non-grid scheme");
  return *g;
}
}  // namespace

double RowSampler::grid_step() const { return grid_of(impl_->v).step; }
long RowSampler::grid_points() const { return static_cast<long>(grid_of(impl_->v).pmf.size()); }
long RowSampler::draw_index(Stream& rng) const { return grid_of(impl_->v).draw_index(rng); }

long long RowSampler::draw_index_sum(long count, Stream& rng) const {
  const auto& g = grid_of(impl_->v);
  long long total = 0;
  for (long i = 0; i < count; ++i) total += g.draw_index(rng);
  return total;
}

std::span<const double> RowSampler::pmf() const { return grid_of(impl_->v).pmf; }

// --- free functions -----------------------------------------------------------

double sample_w(const SchemeSpec& spec, long n, Stream& rng) { return RowSampler(spec, n).draw(rng); }

SumDraw sample_sum(const SchemeSpec& spec, long n, Stream& rng, bool keep_vector) {
  RowSampler sampler(spec, n);
  SumDraw out;
  if (keep_vector) {
    out.values.resize(static_cast<std::size_t>(n));
    sampler.fill(out.values, rng);
    for (double v : out.values) out.sum += v;
  } else {
    out.sum = sampler.draw_sum(n, rng);
  }
  return out;
}

SampleBatch sample_batch(const SchemeSpec& spec, long n, std::size_t replicas, std::uint64_t seed,
                         const BatchOptions& options) {
  RowSampler sampler(spec, n);
  SampleBatch batch;
  batch.n = n;
  batch.seed = seed;
  batch.sums.resize(replicas);
  if (options.keep_vectors) batch.vectors.resize(replicas);
  run_chunked<int>(replicas, options.chunk, options.workers, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Stream rng(seed, chunk);
    for (std::size_t r = b; r < e; ++r) {
      if (options.keep_vectors) {
        auto& row = batch.vectors[r];
        row.resize(static_cast<std::size_t>(n));
        sampler.fill(row, rng);
        double s = 0.0;
        for (double v : row) s += v;
        batch.sums[r] = s;
      } else {
        batch.sums[r] = sampler.draw_sum(n, rng);
      }
    }
    return 0;
  });
  return batch;
}

double h_eval(const SchemeSpec& spec, double x) {
  if (!(x > 0 && x < 1)) throw std::domain_error("h_eval: x must lie in (0, 1)");
  return spec.shape_density()(x);
}

MeanEstimate mean_mu_n(const SchemeSpec& spec, long n, long long samples, std::uint64_t seed) {
  RowSampler sampler(spec, n);
  if (auto m = sampler.exact_mean()) return {*m, 0.0, true};
  if (samples <= 1) throw std::invalid_argument("mean_mu_n: Monte Carlo fallback needs samples > 1");
  Stream rng(seed);
  double sum = 0.0, sq = 0.0;
  for (long long i = 0; i < samples; ++i) {
    const double v = sampler.draw(rng);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, sq / static_cast<double>(samples) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(samples)), false};
}

EstimateResult lln_deviation(const SchemeSpec& spec, long n, double zeta, long long samples, std::uint64_t seed,
                             unsigned workers) {
  if (!(zeta > 0)) throw std::invalid_argument("lln_deviation: zeta must be positive");
  if (samples < 100) throw std::invalid_argument("lln_deviation: need at least 100 samples");
  RowSampler sampler(spec, n);
  const double mu = mean_mu_n(spec, n, 100000, seed ^ 0x5bd1e995ULL).value;
  const double centre = static_cast<double>(n) * mu;
  const double band = zeta * static_cast<double>(n);
  auto counts = run_chunked<long long>(static_cast<std::size_t>(samples), 1 << 12, workers,
                                       [&](std::size_t chunk, std::size_t b, std::size_t e) {
                                         Stream rng(seed, chunk);
                                         long long hits = 0;
                                         for (std::size_t r = b; r < e; ++r)
                                           if (std::abs(sampler.draw_sum(n, rng) - centre) > band) ++hits;
                                         return hits;
                                       });
  return hit_count_estimate(std::accumulate(counts.begin(), counts.end(), 0LL), samples, "lln_deviation");
}

std::vector<TailCheckRow> tail_check(const SchemeSpec& spec, double a, double b, std::span<const long> ns,
                                     long long samples, std::uint64_t seed) {
  if (!(a > 0 && a < b && b <= 1)) throw std::invalid_argument("tail_check: need 0 < a < b <= 1");
  if (samples <= 0) throw std::invalid_argument("tail_check: samples must be positive");
  const ShapeDensity h = spec.shape_density();
  const double alpha = spec.require_alpha();
  const double mass = h.mass(a, b);
  std::vector<TailCheckRow> rows;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const long n = ns[i];
    RowSampler sampler(spec, n);
    Stream rng(seed, i);
    const double lo = a * static_cast<double>(n), hi = b * static_cast<double>(n);
    long long hits = 0;
    for (long long s = 0; s < samples; ++s) {
      const double w = sampler.draw(rng);
      if (w >= lo && w < hi) ++hits;
    }
    const auto est = hit_count_estimate(hits, samples, "tail_check");
    TailCheckRow row;
    row.n = n;
    row.empirical = est.prob;
    row.std_error = est.std_error;
    row.predicted = std::pow(static_cast<double>(n), -alpha) * mass;
    row.ratio = row.empirical / row.predicted;
    row.ratio_std_error = row.std_error / row.predicted;
    rows.push_back(row);
  }
  return rows;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
  const double total = static_cast<double>(sorted.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double before = static_cast<double>(i) / total;
    const double after = static_cast<double>(j) / total;
    worst = std::max({worst, std::abs(after - cdf(sorted[i])), std::abs(before - cdf_left(sorted[i]))});
    i = j;
  }
  return worst;
}

}  // namespace bigjumps
