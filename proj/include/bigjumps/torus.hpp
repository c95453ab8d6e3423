#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bigjumps/random.hpp"

namespace bigjumps {

/// Lattice torus {-N..N}^d with wrap period L = 2N+1, every vertex carrying a
/// Pareto radius with P(R > x) = x^-beta for x >= 1.
struct TorusConfig {
  int d = 1;
  long N = 1;
  double beta = 2.0;
  std::uint64_t seed = 0;

  long side() const { return 2 * N + 1; }
  long n() const;  // (2N+1)^d, throws when it overflows
  void validate() const;
};

struct DegreeSummary {
  std::vector<long> out_degrees;
  std::vector<long> in_degrees;
  long long edge_count = 0;
  double rho_n = 0.0;  // edge_count / n
};

struct CondensationStats {
  double top_k_out_share = 0.0;
  long big_out_count = 0;
  double max_in_share = 0.0;
};

struct GraphOptions {
  // Upper bound on the total number of ball points enumerated in one run.
  long long max_ball_visits = 100'000'000;
  // Vertex index -> forced radius, used for planted-radius demonstrations.
  std::vector<std::pair<long, double>> planted;
  unsigned workers = 1;
};

double torus_distance(int d, long L, std::span<const long> v, std::span<const long> w);

/// Lattice points w != 0 of {-N..N}^d with |w| < R (open ball).
long ball_point_count(int d, long N, double R);

/// Calls fn(offset) for every offset of the open ball, origin excluded.
template <typename Fn>
void for_each_ball_offset(int d, long N, double R, Fn&& fn);

/// Sorted shells of squared norms over {-N..N}^d \ {0}; answers count(R) and
/// radius-of-rank queries in O(log n). Built once per (d, N).
class ShellTable {
 public:
  ShellTable(int d, long N);

  long count_below(double R) const;
  // Smallest radius r such that count_below(R) >= rank for every R > r.
  double radius_of_rank(long rank) const;
  long max_count() const { return total_; }
  // Exact E[count(R)] under P(R > x) = x^-beta, x >= 1.
  double mean_count(double beta) const;

 private:
  std::vector<long long> squared_;   // distinct squared norms, ascending
  std::vector<long> cumulative_;     // points with squared norm <= squared_[i]
  long total_ = 0;
};

double sample_radius(double beta, Stream& rng);
long out_degree_sample(const TorusConfig& config, Stream& rng);

DegreeSummary generate_graph(const TorusConfig& config, const GraphOptions& options = {});
CondensationStats condensation_stats(const DegreeSummary& summary, long k, double eps);

/// Normalized clipped-ball volume Vol(B(0, sqrt(d) r / 2) ∩ [-1/2, 1/2]^d).
double g_eval(int d, double r);
double g_prime(int d, double r);
double g_inverse(int d, double a);

/// Leading constant of n^{beta/d} P(W >= a n) -> C g^{-1}(a)^{-beta}.
double lattice_tail_constant(int d, double beta);
/// The alternative form (4d)^{-beta/2}, kept only for calibration reports.
double lattice_tail_constant_alternative(int d, double beta);
/// Measured c_d with |count_below(R) - (2N)^d g(R / (sqrt(d) N))| <= c_d N^{d-1}, d <= 3.
double sandwich_constant(int d);
double h_lattice(int d, double beta, double x);
/// Integral of h_lattice over [a, b] in closed form.
double h_lattice_mass(int d, double beta, double a, double b);

/// Tabulated g for d >= 3; exposed for persistence and tests.
struct GeometryTable {
  int d = 0;
  std::vector<double> r;
  std::vector<double> g;

  static const GeometryTable& get(int d);
  // Replaces the cached table for table.d, e.g. with one read from disk.
  static void install(GeometryTable table);
  static GeometryTable build(int d, std::size_t points = 4096);
  double eval(double x) const;
  double derivative(double x) const;
  double inverse(double a) const;
};

// ---------------------------------------------------------------------------

namespace detail {
// Half-integer threshold t with s < t iff sqrt(s) < R for integer s, so that
// ball membership agrees with comparing rounded distances against R.
inline double squared_threshold(double R) {
  const double R2 = R * R;
  if (!(R2 < 1e15)) return R2;
  auto s = static_cast<long long>(std::floor(R2)) + 1;
  while (s > 0 && std::sqrt(static_cast<double>(s)) >= R) --s;
  while (std::sqrt(static_cast<double>(s + 1)) < R) ++s;
  return static_cast<double>(s) + 0.5;
}

template <typename Fn>
void ball_recurse(int axis, int d, long m, double R2, long long partial,
                  std::vector<long>& offset, Fn& fn) {
  if (axis == d - 1) {
    // Largest j with partial + j^2 < R^2.
    const double room = R2 - static_cast<double>(partial);
    if (room <= 0) return;
    const double mm = static_cast<double>(m) + 1.0;
    long j = room > mm * mm ? m : static_cast<long>(std::sqrt(room));
    while (j > 0 && static_cast<double>(partial + static_cast<long long>(j) * j) >= R2) --j;
    while (j < m && static_cast<double>(partial + static_cast<long long>(j + 1) * (j + 1)) < R2) ++j;
    j = std::min(j, m);
    for (long x = -j; x <= j; ++x) {
      offset[axis] = x;
      fn(std::span<const long>(offset));
    }
    return;
  }
  for (long x = -m; x <= m; ++x) {
    const long long p = partial + static_cast<long long>(x) * x;
    if (static_cast<double>(p) >= R2) continue;
    offset[axis] = x;
    ball_recurse(axis + 1, d, m, R2, p, offset, fn);
  }
}
}  // namespace detail

template <typename Fn>
void for_each_ball_offset(int d, long N, double R, Fn&& fn) {
  if (!(R > 0)) return;
  const double R2 = detail::squared_threshold(R);
  const long m = R > static_cast<double>(N) + 1.0 ? N : std::min(N, static_cast<long>(std::ceil(R)) - 1);
  std::vector<long> offset(static_cast<std::size_t>(d), 0);
  auto skip_origin = [&](std::span<const long> o) {
    for (long c : o)
      if (c != 0) {
        fn(o);
        return;
      }
  };
  detail::ball_recurse(0, d, m, R2, 0, offset, skip_origin);
}

}  // namespace bigjumps
