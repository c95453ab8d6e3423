#include "bigjumps/rare_event.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace bigjumps {

namespace {

constexpr double kGridSlack = 1e-9;
constexpr std::size_t kChunk = 1 << 12;

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

double log_binomial(long n, int k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Grid index range [first, last] of sums falling in the interval.
std::pair<long long, long long> index_range(const Interval& interval, double step) {
  // Clamped before the cast so infinite bounds stay well defined.
  constexpr double big = 4e18;
  const double first = std::ceil(interval.lo / step - kGridSlack);
  const double last = std::floor(interval.hi / step + kGridSlack);
  return {static_cast<long long>(std::clamp(first, -big, big)), static_cast<long long>(std::clamp(last, -big, big))};
}

void warn_if_rare(EstimateResult& r) {
  if (r.hits < 25)
    r.warning = "only " + std::to_string(r.hits) + " hits; estimate unreliable (fewer than 25 expected)";
}

}  // namespace

// --- windows --------------------------------------------------------------------

double WidthRule::width(long n) const {
  if (kind == Kind::fixed) return w0;
  return w0 * std::pow(static_cast<double>(n), -gamma);
}

std::string WidthRule::describe() const {
  std::ostringstream s;
  if (kind == Kind::fixed)
    s << "fixed(" << w0 << ")";
  else
    s << "power(" << w0 << "," << gamma << ")";
  return s.str();
}

RhoWindow::RhoWindow(double rho, WidthRule rule, double alpha) : rho_(rho), rule_(rule) {
  if (!(rho > 0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive");
  if (is_integer(rho)) throw std::invalid_argument("integer rho is not supported");
  k_ = static_cast<int>(std::ceil(rho));
  if (!(rule.w0 > 0)) throw std::invalid_argument("window width must be positive");
  if (rule.kind == WidthRule::Kind::power) {
    if (!(rule.gamma >= 0)) throw std::invalid_argument("power rule needs gamma >= 0");
    if (!std::isnan(alpha) && !(rule.gamma < std::min(1.0, alpha - 1.0)))
      throw std::invalid_argument("power rule needs gamma < min(1, alpha - 1)");
  }
}

RhoWindow RhoWindow::between(double rho1, double rho2) {
  if (!(rho1 <= rho2)) throw std::invalid_argument("empty window: rho1 > rho2");
  if (!(rho2 > rho1)) throw std::invalid_argument("window width must be positive");
  RhoWindow w(0.5 * (rho1 + rho2), WidthRule::fixed(rho2 - rho1));
  w.explicit_ = std::pair{rho1, rho2};
  return w;
}

std::pair<double, double> RhoWindow::bounds(long n) const {
  if (explicit_) return *explicit_;
  const double half = 0.5 * rule_.width(n);
  return {rho_ - half, rho_ + half};
}

double RhoWindow::width(long n) const {
  const auto [a, b] = bounds(n);
  return b - a;
}

Interval interval_for(const RhoWindow& window, long n, double mu) {
  const auto [r1, r2] = window.bounds(n);
  const auto nd = static_cast<double>(n);
  return {nd * (r1 + mu), nd * (r2 + mu)};
}

double default_eps(double rho, double alpha) {
  const double k = std::ceil(rho);
  return 0.5 * (rho - (k - 1)) / (k + 2.0 / (alpha - 1.0));
}

// --- estimators ------------------------------------------------------------------

EstimateResult estimate_naive(const SchemeSpec& spec, long n, const Interval& interval, long long samples,
                              const RunOptions& options) {
  if (samples < 10'000) throw std::invalid_argument("estimate_naive: need at least 10^4 samples");
  if (!(interval.lo <= interval.hi)) throw std::invalid_argument("estimate_naive: empty interval");
  RowSampler sampler(spec, n);
  std::vector<long long> counts;
  if (spec.is_discrete()) {
    const auto [first, last] = index_range(interval, sampler.grid_step());
    counts = run_chunked<long long>(static_cast<std::size_t>(samples), kChunk, options.workers,
                                    [&](std::size_t chunk, std::size_t b, std::size_t e) {
                                      Stream rng(options.seed, chunk);
                                      long long hits = 0;
                                      for (std::size_t r = b; r < e; ++r) {
                                        const long long s = sampler.draw_index_sum(n, rng);
                                        hits += s >= first && s <= last;
                                      }
                                      return hits;
                                    });
  } else {
    counts = run_chunked<long long>(static_cast<std::size_t>(samples), kChunk, options.workers,
                                    [&](std::size_t chunk, std::size_t b, std::size_t e) {
                                      Stream rng(options.seed, chunk);
                                      long long hits = 0;
                                      for (std::size_t r = b; r < e; ++r) hits += interval.contains(sampler.draw_sum(n, rng));
                                      return hits;
                                    });
  }
  auto r = hit_count_estimate(std::accumulate(counts.begin(), counts.end(), 0LL), samples, "naive");
  warn_if_rare(r);
  return r;
}

EstimateResult estimate_naive(const SchemeSpec& spec, long n, const RhoWindow& window, double mu_ref,
                              long long samples, const RunOptions& options) {
  return estimate_naive(spec, n, interval_for(window, n, mu_ref), samples, options);
}

std::vector<double> exact_sum_pmf(const SchemeSpec& spec, long n) {
  if (!spec.is_discrete()) throw std::invalid_argument("exact_dp requires a DiscreteGrid scheme");
  if (n < 1) throw std::invalid_argument("exact_dp: n must be >= 1");
  const auto& pmf = std::get<DiscreteGrid>(spec.shape).pmf;
  const long m = static_cast<long>(pmf.size()) - 1;
  if (static_cast<double>(n) * static_cast<double>(m) > 1e6)
    throw std::length_error("exact_dp: n m exceeds 10^6 grid cells");
  std::vector<double> dist{1.0};
  std::vector<double> next;
  for (long step = 0; step < n; ++step) {
    next.assign(dist.size() + static_cast<std::size_t>(m), 0.0);
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] == 0.0) continue;
      for (std::size_t j = 0; j < pmf.size(); ++j) next[i + j] += dist[i] * pmf[j];
    }
    dist.swap(next);
  }
  return dist;
}

double exact_dp(const SchemeSpec& spec, long n, const Interval& interval) {
  const auto dist = exact_sum_pmf(spec, n);
  const double step = RowSampler(spec, n).grid_step();
  auto [first, last] = index_range(interval, step);
  first = std::max(first, 0LL);
  last = std::min(last, static_cast<long long>(dist.size()) - 1);
  double p = 0.0;
  for (long long i = first; i <= last; ++i) p += dist[static_cast<std::size_t>(i)];
  return std::min(p, 1.0);
}

double theorem1_rhs(long n, int k, double alpha, double width, double krho) {
  if (!std::isfinite(krho)) throw std::domain_error("theorem1_rhs: K_rho is not finite");
  if (krho <= 0 || width <= 0) return 0.0;
  const double log_rhs =
      log_binomial(n, k) + std::log(width) - alpha * k * std::log(static_cast<double>(n)) + std::log(krho);
  return std::exp(log_rhs);
}

double theorem1_rhs(const SchemeSpec& spec, long n, const RhoWindow& window, const KrhoResult& krho) {
  if (krho.diverged) throw std::domain_error("theorem1_rhs: K_rho diverged");
  return theorem1_rhs(n, window.k(), spec.require_alpha(), window.width(n), krho.value);
}

EstimateResult tk_window_prob(const SchemeSpec& spec, int k, long n, double sigma1, double sigma2,
                              long long samples, const RunOptions& options) {
  if (k < 1) throw std::invalid_argument("tk_window_prob: k must be >= 1");
  if (!(sigma1 < sigma2)) throw std::invalid_argument("tk_window_prob: need sigma1 < sigma2");
  if (samples < 1) throw std::invalid_argument("tk_window_prob: samples must be positive");
  RowSampler sampler(spec, n);
  const auto nd = static_cast<double>(n);
  EstimateResult r;
  r.method = "tk_boosted";
  r.samples = samples;
  if (!(sigma1 > k - 1 && sigma2 < k)) r.warning = "sigma window is not inside (k-1, k)";
  const double threshold = nd * (sigma1 - (k - 1));
  const double q = threshold > 0 ? sampler.tail(threshold, true) : 1.0;
  if (q <= 0) return r;
  const double weight = std::pow(q, k);
  const Interval target{nd * sigma1, nd * sigma2};
  std::optional<std::pair<long long, long long>> grid;
  if (spec.is_discrete()) grid = index_range(target, sampler.grid_step());
  auto counts = run_chunked<long long>(static_cast<std::size_t>(samples), kChunk, options.workers,
                                       [&](std::size_t chunk, std::size_t b, std::size_t e) {
                                         Stream rng(options.seed, chunk);
                                         long long hits = 0;
                                         for (std::size_t s = b; s < e; ++s) {
                                           double t = 0.0;
                                           for (int j = 0; j < k; ++j)
                                             t += threshold > 0 ? sampler.draw_tail(threshold, true, rng) : sampler.draw(rng);
                                           if (grid) {
                                             const auto idx = std::llround(t / sampler.grid_step());
                                             hits += idx >= grid->first && idx <= grid->second;
                                           } else {
                                             hits += target.contains(t);
                                           }
                                         }
                                         return hits;
                                       });
  r.hits = std::accumulate(counts.begin(), counts.end(), 0LL);
  const double f = static_cast<double>(r.hits) / static_cast<double>(samples);
  r.prob = weight * f;
  r.std_error = weight * std::sqrt(f * (1 - f) / static_cast<double>(samples));
  return r;
}

EstimateResult estimate_structured(const SchemeSpec& spec, long n, const RhoWindow& window, double mu_ref,
                                   double eps, long long samples, const RunOptions& options,
                                   const StructuredOptions& structured) {
  const int k = window.k();
  const double rho = window.rho();
  if (!(eps > 0 && eps < (rho - (k - 1)) / k)) throw std::invalid_argument("estimate_structured: eps out of range");
  if (n <= k) throw std::invalid_argument("estimate_structured: need n > k");
  if (samples < 100) throw std::invalid_argument("estimate_structured: need at least 100 samples");
  RowSampler sampler(spec, n);
  const auto nd = static_cast<double>(n);
  const double cut = eps * nd;
  const double p_big = sampler.tail(cut, false);
  const double log_q = k * std::log(p_big) + static_cast<double>(n - k) * std::log1p(-p_big);
  const double scale = std::exp(log_binomial(n, k) + log_q);
  const Interval target = interval_for(window, n, mu_ref);
  const double bulk_centre = static_cast<double>(n - k) * mu_ref;

  EstimateResult r;
  r.method = "structured";
  if (p_big <= 0 || scale <= 0) return r;

  // T_k given every coordinate > eps n.
  const long long jump_samples = samples;
  std::vector<double> tk(static_cast<std::size_t>(jump_samples));
  run_chunked<int>(tk.size(), kChunk, options.workers, [&](std::size_t chunk, std::size_t b, std::size_t e) {
    Stream rng(options.seed, chunk);
    for (std::size_t s = b; s < e; ++s) {
      double t = 0.0;
      for (int j = 0; j < k; ++j) t += sampler.draw_tail(cut, false, rng);
      tk[s] = t;
    }
    return 0;
  });
  std::sort(tk.begin(), tk.end());
  auto window_fraction = [&](double lo, double hi) {
    const auto a = std::lower_bound(tk.begin(), tk.end(), lo);
    const auto b = std::upper_bound(tk.begin(), tk.end(), hi);
    return b > a ? static_cast<double>(b - a) / static_cast<double>(tk.size()) : 0.0;
  };

  const long long bulk_samples = structured.bulk_samples > 0 ? structured.bulk_samples : std::max(100LL, samples / 4);
  struct Acc {
    double sum = 0.0, sq = 0.0;
  };
  const std::uint64_t bulk_seed = mix64(options.seed ^ 0x2545f4914f6cdd1dULL);
  auto parts = run_chunked<Acc>(static_cast<std::size_t>(bulk_samples), kChunk, options.workers,
                                [&](std::size_t chunk, std::size_t b, std::size_t e) {
                                  Stream rng(bulk_seed, chunk);
                                  Acc acc;
                                  for (std::size_t s = b; s < e; ++s) {
                                    double bulk = 0.0;
                                    for (long i = k; i < n; ++i) bulk += sampler.draw_body(cut, rng);
                                    double y = 0.0;
                                    if (std::abs(bulk - bulk_centre) <= structured.slack)
                                      y = window_fraction(target.lo - bulk, target.hi - bulk);
                                    acc.sum += y;
                                    acc.sq += y * y;
                                  }
                                  return acc;
                                });
  Acc total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sq += p.sq;
  }
  const auto mb = static_cast<double>(bulk_samples);
  const double mean = total.sum / mb;
  const double var = std::max(0.0, total.sq / mb - mean * mean);
  r.prob = scale * mean;
  // Bulk spread plus the error of the shared T_k window fractions.
  r.std_error = scale * std::sqrt(var / mb + mean * (1 - mean) / static_cast<double>(jump_samples));
  r.samples = jump_samples + bulk_samples;
  r.hits = static_cast<long long>(std::llround(mean * static_cast<double>(jump_samples)));
  return r;
}

// --- conditional structure ----------------------------------------------------------

JumpProfile decompose(std::span<const double> row, double threshold) {
  JumpProfile p;
  p.n = static_cast<long>(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] > threshold)
      p.big_jumps.emplace_back(static_cast<long>(i), row[i]);
    else
      p.bulk_sum += row[i];
  }
  std::stable_sort(p.big_jumps.begin(), p.big_jumps.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  p.s_n = p.bulk_sum;
  for (const auto& [i, v] : p.big_jumps) p.s_n += v;
  return p;
}

ProfileRun conditional_profiles(const SchemeSpec& spec, long n, const Interval& interval, double eps,
                                std::size_t target_hits, long long max_samples, const RunOptions& options) {
  if (!(eps > 0)) throw std::invalid_argument("conditional_profiles: eps must be positive");
  RowSampler sampler(spec, n);
  const double threshold = eps * static_cast<double>(n);
  const unsigned workers = std::max(1U, options.workers);
  ProfileRun run;
  std::size_t next_chunk = 0;
  while (run.profiles.size() < target_hits && run.samples < max_samples) {
    // One round: `workers` chunks, merged in chunk order.
    const long long remaining = max_samples - run.samples;
    const auto round = static_cast<std::size_t>(std::min<long long>(remaining, static_cast<long long>(kChunk) * workers));
    const std::size_t base = next_chunk;
    auto parts = run_chunked<std::vector<JumpProfile>>(
        round, kChunk, workers, [&](std::size_t chunk, std::size_t b, std::size_t e) {
          Stream rng(options.seed, base + chunk);
          std::vector<JumpProfile> found;
          std::vector<double> row(static_cast<std::size_t>(n));
          for (std::size_t s = b; s < e; ++s) {
            sampler.fill(row, rng);
            auto p = decompose(row, threshold);
            if (interval.contains(p.s_n)) found.push_back(std::move(p));
          }
          return found;
        });
    next_chunk += (round + kChunk - 1) / kChunk;
    // Consume whole chunks in order so the result does not depend on the worker count.
    for (std::size_t c = 0; c < parts.size() && run.profiles.size() < target_hits; ++c) {
      for (auto& p : parts[c]) {
        if (run.profiles.size() == target_hits) break;
        run.profiles.push_back(std::move(p));
      }
      run.samples += static_cast<long long>(std::min(kChunk, round - c * kChunk));
    }
  }
  run.exhausted = run.profiles.size() < target_hits;
  return run;
}

ProfileRun conditional_profiles(const SchemeSpec& spec, long n, const RhoWindow& window, double mu_ref, double eps,
                                std::size_t target_hits, long long max_samples, const RunOptions& options) {
  return conditional_profiles(spec, n, interval_for(window, n, mu_ref), eps, target_hits, max_samples, options);
}

double corollary1_fraction(std::span<const JumpProfile> profiles, int k, double gamma, double mu_ref, double rho) {
  if (profiles.empty()) return 0.0;
  std::size_t good = 0;
  for (const auto& p : profiles) {
    if (static_cast<int>(p.big_jumps.size()) != k) continue;
    const auto nd = static_cast<double>(p.n);
    double big = 0.0;
    for (const auto& [i, v] : p.big_jumps) big += v;
    if (std::abs(big - rho * nd) <= gamma * nd && std::abs(p.bulk_sum - mu_ref * nd) <= gamma * nd) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(profiles.size());
}

double big_jump_fraction(std::span<const JumpProfile> profiles, int count) {
  if (profiles.empty()) return 0.0;
  const auto c = std::count_if(profiles.begin(), profiles.end(),
                               [&](const JumpProfile& p) { return static_cast<int>(p.big_jumps.size()) >= count; });
  return static_cast<double>(c) / static_cast<double>(profiles.size());
}

GofResult gof_points(std::span<const std::vector<double>> points, const ShapeDensity& h, double rho, int k,
                     double krho, int bins, double tol) {
  if (k < 2) throw std::invalid_argument("corollary2_gof: k must be >= 2");
  if (bins < 1) throw std::invalid_argument("corollary2_gof: bins must be >= 1");
  if (!(krho > 0) || !std::isfinite(krho)) throw std::domain_error("corollary2_gof: K_rho must be finite and positive");
  const int dims = k - 1;
  const int per_axis = std::max(1, static_cast<int>(std::lround(std::pow(bins, 1.0 / dims))));
  const double lo = std::max(0.0, rho - (k - 1));
  const double width = (1.0 - lo) / per_axis;
  std::size_t cells = 1;
  for (int i = 0; i < dims; ++i) cells *= static_cast<std::size_t>(per_axis);

  GofResult g;
  std::vector<double> observed(cells, 0.0), expected(cells, 0.0);
  for (const auto& x : points) {
    if (static_cast<int>(x.size()) < dims) throw std::invalid_argument("corollary2_gof: point has too few coordinates");
    std::size_t cell = 0;
    bool clamped = false;
    for (int a = 0; a < dims; ++a) {
      auto b = static_cast<long>(std::floor((x[static_cast<std::size_t>(a)] - lo) / width));
      if (b < 0 || b >= per_axis) clamped = true;
      b = std::clamp(b, 0L, static_cast<long>(per_axis) - 1);
      cell = cell * static_cast<std::size_t>(per_axis) + static_cast<std::size_t>(b);
    }
    g.clamped += clamped;
    observed[cell] += 1.0;
  }
  g.used = points.size();
  const auto total = static_cast<double>(points.size());
  std::vector<std::pair<double, double>> box(static_cast<std::size_t>(dims));
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    for (int a = dims - 1; a >= 0; --a) {
      const auto b = static_cast<double>(rest % static_cast<std::size_t>(per_axis));
      rest /= static_cast<std::size_t>(per_axis);
      box[static_cast<std::size_t>(a)] = {lo + b * width, lo + (b + 1) * width};
    }
    expected[cell] = total * slab_integral(h, rho, k, box, tol * krho).value / krho;
  }

  // Merge neighbours (in cell order) until every expected count is at least 5.
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0 || o_acc > 0) {
    if (exp.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }
  g.bins_used = static_cast<int>(exp.size());
  if (g.bins_used < static_cast<int>(cells))
    g.note = "merged " + std::to_string(cells) + " bins into " + std::to_string(g.bins_used) + " (expected count < 5)";
  if (g.clamped > 0) {
    if (!g.note.empty()) g.note += "; ";
    g.note += std::to_string(g.clamped) + " points outside the support were counted in edge bins";
  }
  g.observed = obs;
  g.expected = exp;
  if (points.empty()) {
    g.p_value = std::numeric_limits<double>::quiet_NaN();
    g.note = "no usable points";
    return g;
  }
  if (g.bins_used <= 1) {
    g.chi2 = 0.0;
    g.dof = 0;
    g.p_value = 1.0;
    return g;
  }
  for (std::size_t i = 0; i < exp.size(); ++i) g.chi2 += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  g.dof = g.bins_used - 1;
  boost::math::chi_squared dist(g.dof);
  g.p_value = boost::math::cdf(boost::math::complement(dist, g.chi2));
  return g;
}

GofResult corollary2_gof(std::span<const JumpProfile> profiles, const ShapeDensity& h, double rho, int k,
                         double krho, int bins, std::uint64_t seed) {
  Stream rng(seed);
  std::vector<std::vector<double>> points;
  std::size_t skipped = 0;
  for (const auto& p : profiles) {
    if (static_cast<int>(p.big_jumps.size()) != k) {
      ++skipped;
      continue;
    }
    std::vector<double> x;
    for (const auto& [i, v] : p.big_jumps) x.push_back(v / static_cast<double>(p.n));
    std::shuffle(x.begin(), x.end(), rng.engine());
    x.pop_back();
    points.push_back(std::move(x));
  }
  auto g = gof_points(points, h, rho, k, krho, bins);
  g.skipped = skipped;
  if (skipped > 0) {
    if (!g.note.empty()) g.note += "; ";
    g.note += std::to_string(skipped) + " profiles without exactly k big jumps skipped";
  }
  return g;
}

std::vector<SweepRow> ratio_sweep(const SchemeSpec& spec, double rho, const WidthRule& rule,
                                  std::span<const long> ns, long long samples_per_n, const SweepOptions& options) {
  const RhoWindow window(rho, rule, spec.alpha);
  const int k = window.k();
  std::optional<double> K = options.krho;
  std::string krho_error;
  if (!K) {
    try {
      const auto kr = krho_eval(spec.shape_density(), rho, k, options.krho_tol);
      if (kr.diverged) throw std::domain_error("K_rho diverged: " + kr.note);
      K = kr.value;
    } catch (const std::exception& e) {
      krho_error = e.what();
    }
  }
  std::vector<SweepRow> rows;
  for (long n : ns) {
    auto fill_ratio = [&](SweepRow& row) {
      if (!K) {
        row.rhs = std::numeric_limits<double>::quiet_NaN();
        row.ratio = std::numeric_limits<double>::quiet_NaN();
        row.error = krho_error;
        return;
      }
      row.rhs = theorem1_rhs(n, k, spec.require_alpha(), window.width(n), *K);
      row.ratio = row.rhs > 0 ? row.prob / row.rhs : std::numeric_limits<double>::quiet_NaN();
    };
    SweepRow row;
    row.n = n;
    try {
      const double mu = mean_mu_n(spec, n, 1'000'000, options.run.seed).value;
      const Interval interval = interval_for(window, n, mu);
      RunOptions run = options.run;
      run.seed = stream_key(options.run.seed, static_cast<std::uint64_t>(n));
      if (spec.is_discrete()) {
        row.method = "exact_dp";
        row.prob = exact_dp(spec, n, interval);
      } else {
        row.method = "naive";
        const auto est = estimate_naive(spec, n, interval, samples_per_n, run);
        row.prob = est.prob;
        row.std_error = est.std_error;
      }
      fill_ratio(row);
      rows.push_back(row);
      if (options.structured && !spec.is_discrete()) {
        SweepRow srow;
        srow.n = n;
        srow.method = "structured";
        const double eps = options.eps.value_or(default_eps(rho, spec.require_alpha()));
        const auto est = estimate_structured(spec, n, window, mu, eps, samples_per_n, run);
        srow.prob = est.prob;
        srow.std_error = est.std_error;
        fill_ratio(srow);
        rows.push_back(srow);
      }
    } catch (const std::exception& e) {
      if (row.method.empty()) row.method = spec.is_discrete() ? "exact_dp" : "naive";
      row.error = e.what();
      row.prob = row.rhs = row.ratio = std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace bigjumps
