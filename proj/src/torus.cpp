#include "bigjumps/torus.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bigjumps/quadrature.hpp"

namespace bigjumps {

long TorusConfig::n() const {
  long total = 1;
  const long L = side();
  for (int i = 0; i < d; ++i) {
    if (total > LONG_MAX / L) throw std::overflow_error("torus size (2N+1)^d overflows");
    total *= L;
  }
  return total;
}

void TorusConfig::validate() const {
  if (d < 1) throw std::invalid_argument("torus dimension d must be >= 1");
  if (N < 1) throw std::invalid_argument("torus half-width N must be >= 1");
  if (!(beta > d)) throw std::invalid_argument("radius tail exponent beta must exceed d");
  (void)n();
}

double torus_distance(int d, long L, std::span<const long> v, std::span<const long> w) {
  if (static_cast<int>(v.size()) != d || static_cast<int>(w.size()) != d)
    throw std::invalid_argument("torus_distance: coordinate vectors must have length d");
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    long diff = (v[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)]) % L;
    if (diff < 0) diff += L;
    const long wrapped = std::min(diff, L - diff);
    s += static_cast<double>(wrapped) * static_cast<double>(wrapped);
  }
  return std::sqrt(s);
}

namespace {

long count_recurse(int axis, int d, long m, double R2, long long partial) {
  const double room = R2 - static_cast<double>(partial);
  if (room <= 0) return 0;
  if (axis == d - 1) {
    const double mm = static_cast<double>(m) + 1.0;
    long j = room > mm * mm ? m : static_cast<long>(std::sqrt(room));
    while (j > 0 && static_cast<double>(partial + static_cast<long long>(j) * j) >= R2) --j;
    while (j < m && static_cast<double>(partial + static_cast<long long>(j + 1) * (j + 1)) < R2) ++j;
    return 2 * j + 1;
  }
  long total = 0;
  for (long x = -m; x <= m; ++x) {
    const long long p = partial + static_cast<long long>(x) * x;
    if (static_cast<double>(p) >= R2) continue;
    total += count_recurse(axis + 1, d, m, R2, p);
  }
  return total;
}

}  // namespace

long ball_point_count(int d, long N, double R) {
  if (d < 1 || N < 1) throw std::invalid_argument("ball_point_count: need d >= 1 and N >= 1");
  if (!(R > 0)) return 0;
  const long m = R > static_cast<double>(N) + 1.0 ? N : std::min(N, static_cast<long>(std::ceil(R)) - 1);
  // The origin always lies in an open ball of positive radius.
  return count_recurse(0, d, m, detail::squared_threshold(R), 0) - 1;
}

ShellTable::ShellTable(int d, long N) {
  TorusConfig cfg{d, N, static_cast<double>(d) + 1.0, 0};
  const long n = cfg.n();
  const long L = cfg.side();
  std::vector<long long> sq;
  sq.reserve(static_cast<std::size_t>(n - 1));
  for (long idx = 0; idx < n; ++idx) {
    long rest = idx;
    long long s = 0;
    for (int a = 0; a < d; ++a) {
      const long c = rest % L - N;
      rest /= L;
      s += static_cast<long long>(c) * c;
    }
    if (s != 0) sq.push_back(s);
  }
  std::sort(sq.begin(), sq.end());
  for (std::size_t i = 0; i < sq.size();) {
    std::size_t j = i;
    while (j < sq.size() && sq[j] == sq[i]) ++j;
    squared_.push_back(sq[i]);
    cumulative_.push_back(static_cast<long>(j));
    i = j;
  }
  total_ = static_cast<long>(sq.size());
}

long ShellTable::count_below(double R) const {
  if (!(R > 0)) return 0;
  const double R2 = detail::squared_threshold(R);
  // First shell with squared norm >= R^2.
  auto it = std::partition_point(squared_.begin(), squared_.end(),
                                 [&](long long s) { return static_cast<double>(s) < R2; });
  if (it == squared_.begin()) return 0;
  return cumulative_[static_cast<std::size_t>(it - squared_.begin()) - 1];
}

double ShellTable::radius_of_rank(long rank) const {
  if (rank <= 0) return 0.0;
  if (rank > total_) return std::numeric_limits<double>::infinity();
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), rank);
  return std::sqrt(static_cast<double>(squared_[static_cast<std::size_t>(it - cumulative_.begin())]));
}

double ShellTable::mean_count(double beta) const {
  double mean = 0.0;
  long prev = 0;
  for (std::size_t i = 0; i < squared_.size(); ++i) {
    const double r = std::sqrt(static_cast<double>(squared_[i]));
    const double survive = r <= 1.0 ? 1.0 : std::pow(r, -beta);
    mean += static_cast<double>(cumulative_[i] - prev) * survive;
    prev = cumulative_[i];
  }
  return mean;
}

double sample_radius(double beta, Stream& rng) { return std::pow(rng.uniform(), -1.0 / beta); }

long out_degree_sample(const TorusConfig& config, Stream& rng) {
  return ball_point_count(config.d, config.N, sample_radius(config.beta, rng));
}

DegreeSummary generate_graph(const TorusConfig& config, const GraphOptions& options) {
  config.validate();
  const long n = config.n();
  const long L = config.side();
  const int d = config.d;

  std::vector<double> radius(static_cast<std::size_t>(n));
  for (long v = 0; v < n; ++v)
    radius[static_cast<std::size_t>(v)] =
        std::pow(hashed_uniform(config.seed, static_cast<std::uint64_t>(v)), -1.0 / config.beta);
  for (const auto& [v, r] : options.planted) {
    if (v < 0 || v >= n) throw std::out_of_range("planted vertex index outside the torus");
    radius[static_cast<std::size_t>(v)] = r;
  }

  DegreeSummary summary;
  summary.out_degrees.resize(static_cast<std::size_t>(n));
  long long visits = 0;
  for (long v = 0; v < n; ++v) {
    const long deg = ball_point_count(d, config.N, radius[static_cast<std::size_t>(v)]);
    summary.out_degrees[static_cast<std::size_t>(v)] = deg;
    visits += deg;
  }
  if (visits > options.max_ball_visits)
    throw std::length_error("generate_graph: " + std::to_string(visits) +
                            " ball points exceed the configured visit cap");
  summary.edge_count = visits;
  summary.rho_n = static_cast<double>(visits) / static_cast<double>(n);

  // Each worker owns a strided subset of centres and a private in-degree array.
  const unsigned workers = std::max(1U, options.workers);
  std::vector<std::vector<long>> partial(workers);
  auto accumulate = [&](unsigned w) {
    auto& in = partial[w];
    in.assign(static_cast<std::size_t>(n), 0);
    std::vector<long> centre(static_cast<std::size_t>(d));
    for (long v = static_cast<long>(w); v < n; v += static_cast<long>(workers)) {
      long rest = v;
      for (int a = 0; a < d; ++a) {
        centre[static_cast<std::size_t>(a)] = rest % L;
        rest /= L;
      }
      for_each_ball_offset(d, config.N, radius[static_cast<std::size_t>(v)], [&](std::span<const long> off) {
        long idx = 0;
        for (int a = d - 1; a >= 0; --a) {
          long c = (centre[static_cast<std::size_t>(a)] + off[static_cast<std::size_t>(a)]) % L;
          if (c < 0) c += L;
          idx = idx * L + c;
        }
        ++in[static_cast<std::size_t>(idx)];
      });
    }
  };
  if (workers == 1) {
    accumulate(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(accumulate, w);
    for (auto& t : pool) t.join();
  }
  summary.in_degrees.assign(static_cast<std::size_t>(n), 0);
  for (const auto& in : partial)
    for (std::size_t i = 0; i < in.size(); ++i) summary.in_degrees[i] += in[i];
  return summary;
}

CondensationStats condensation_stats(const DegreeSummary& summary, long k, double eps) {
  const auto n = static_cast<long>(summary.out_degrees.size());
  if (n == 0) throw std::invalid_argument("condensation_stats: empty graph");
  if (k < 0) throw std::invalid_argument("condensation_stats: k must be nonnegative");
  CondensationStats stats;
  std::vector<long> out = summary.out_degrees;
  const long top = std::min(k, n);
  std::partial_sort(out.begin(), out.begin() + top, out.end(), std::greater<>());
  long long top_sum = 0;
  for (long i = 0; i < top; ++i) top_sum += out[static_cast<std::size_t>(i)];
  stats.top_k_out_share = static_cast<double>(top_sum) / static_cast<double>(n);
  const double threshold = eps * static_cast<double>(n);
  for (long deg : summary.out_degrees)
    if (static_cast<double>(deg) > threshold) ++stats.big_out_count;
  const long max_in = *std::max_element(summary.in_degrees.begin(), summary.in_degrees.end());
  stats.max_in_share = static_cast<double>(max_in) / static_cast<double>(n);
  return stats;
}

// --- geometry -------------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

// Area of the disk of radius s clipped to the centred unit square.
double clipped_disk_area(double s) {
  if (s <= 0) return 0.0;
  if (s <= 0.5) return kPi * s * s;
  if (s >= std::numbers::sqrt2 / 2) return 1.0;
  const double segment = s * s * std::acos(0.5 / s) - 0.5 * std::sqrt(s * s - 0.25);
  return kPi * s * s - 4.0 * segment;
}

double clipped_disk_perimeter(double s) {
  if (s <= 0) return 0.0;
  if (s <= 0.5) return 2.0 * kPi * s;
  if (s >= std::numbers::sqrt2 / 2) return 0.0;
  return s * (2.0 * kPi - 8.0 * std::acos(0.5 / s));
}

double unit_ball_volume(int d) { return std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1.0); }

// Volume of the ball of radius s clipped to [-1/2, 1/2]^d, by cross-sections.
double clipped_ball_volume(int d, double s) {
  if (s <= 0) return 0.0;
  if (d == 1) return std::min(2.0 * s, 1.0);
  if (d == 2) return clipped_disk_area(s);
  if (s <= 0.5) return unit_ball_volume(d) * std::pow(s, d);
  if (s * s >= d / 4.0) return 1.0;
  // Integrand V_{d-1}(sqrt(s^2 - z^2)) has kinks where the section radius
  // crosses sqrt(j)/2.
  std::vector<double> cuts{0.0, 0.5};
  for (int j = 1; j < d; ++j) {
    const double z2 = s * s - j / 4.0;
    if (z2 > 0 && z2 < 0.25) cuts.push_back(std::sqrt(z2));
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_panels(
        [&](double z) { return clipped_ball_volume(d - 1, std::sqrt(std::max(0.0, s * s - z * z))); }, cuts[i],
        cuts[i + 1], 2, 20);
  }
  return 2.0 * total;
}

double bisect_inverse(const std::function<double(double)>& g, double a) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < a ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GeometryTable GeometryTable::build(int d, std::size_t points) {
  if (d < 1) throw std::invalid_argument("GeometryTable: d must be >= 1");
  if (points < 2) throw std::invalid_argument("GeometryTable: need at least two grid points");
  GeometryTable t;
  t.d = d;
  t.r.resize(points);
  t.g.resize(points);
  const double scale = std::sqrt(static_cast<double>(d)) / 2.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(points - 1);
    t.r[i] = r;
    t.g[i] = i + 1 == points ? 1.0 : clipped_ball_volume(d, scale * r);
  }
  return t;
}

namespace {
std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}
std::map<int, GeometryTable>& cache_map() {
  static std::map<int, GeometryTable> m;
  return m;
}
}  // namespace

const GeometryTable& GeometryTable::get(int d) {
  std::lock_guard lock(cache_mutex());
  auto& cache = cache_map();
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, build(d)).first;
  return it->second;
}

void GeometryTable::install(GeometryTable table) {
  if (table.r.size() < 2 || table.r.size() != table.g.size()) throw std::invalid_argument("GeometryTable: malformed table");
  std::lock_guard lock(cache_mutex());
  cache_map()[table.d] = std::move(table);
}

double GeometryTable::eval(double x) const {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double pos = x * static_cast<double>(r.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), r.size() - 2);
  const double t = pos - static_cast<double>(i);
  return g[i] + t * (g[i + 1] - g[i]);
}

double GeometryTable::derivative(double x) const {
  const double step = 1.0 / static_cast<double>(r.size() - 1);
  if (x <= 0 || x >= 1) return 0.0;
  const double lo = std::max(0.0, x - step), hi = std::min(1.0, x + step);
  return (eval(hi) - eval(lo)) / (hi - lo);
}

double GeometryTable::inverse(double a) const {
  return bisect_inverse([this](double x) { return eval(x); }, a);
}

double g_eval(int d, double r) {
  if (d < 1) throw std::invalid_argument("g_eval: d must be >= 1");
  if (r <= 0) return 0.0;
  if (r >= 1) return 1.0;
  if (d == 1) return r;
  if (d == 2) return clipped_disk_area(r / std::numbers::sqrt2);
  return GeometryTable::get(d).eval(r);
}

double g_prime(int d, double r) {
  if (d < 1) throw std::invalid_argument("g_prime: d must be >= 1");
  if (r >= 1) return 0.0;
  if (d == 1) return 1.0;
  if (r <= 0) return 0.0;
  if (d == 2) return clipped_disk_perimeter(r / std::numbers::sqrt2) / std::numbers::sqrt2;
  return GeometryTable::get(d).derivative(r);
}

double g_inverse(int d, double a) {
  if (!(a > 0 && a < 1)) throw std::domain_error("g_inverse: argument must lie in (0, 1)");
  if (d == 1) return a;
  if (d == 2) return bisect_inverse([](double x) { return g_eval(2, x); }, a);
  return GeometryTable::get(d).inverse(a);
}

double lattice_tail_constant(int d, double beta) { return std::pow(4.0 / d, beta / 2.0); }

double sandwich_constant(int d) {
  static constexpr double measured[] = {0.0, 2.0, 12.0, 40.0};
  if (d < 1 || d > 3) throw std::domain_error("sandwich_constant: measured for d = 1, 2, 3 only");
  return measured[d];
}

double lattice_tail_constant_alternative(int d, double beta) { return std::pow(4.0 * d, -beta / 2.0); }

double h_lattice(int d, double beta, double x) {
  if (!(x > 0 && x < 1)) throw std::domain_error("h_lattice: x must lie in (0, 1)");
  const double r = g_inverse(d, x);
  const double slope = g_prime(d, r);
  if (!(slope > 0)) return std::numeric_limits<double>::infinity();
  return lattice_tail_constant(d, beta) * beta * std::pow(r, -beta - 1.0) / slope;
}

double h_lattice_mass(int d, double beta, double a, double b) {
  if (!(a > 0) || b > 1 || b < a) throw std::domain_error("h_lattice_mass: need 0 < a <= b <= 1");
  const double ra = g_inverse(d, std::min(a, 1.0 - 1e-15));
  const double rb = b >= 1.0 ? 1.0 : g_inverse(d, b);
  return lattice_tail_constant(d, beta) * (std::pow(ra, -beta) - std::pow(rb, -beta));
}

}  // namespace bigjumps
