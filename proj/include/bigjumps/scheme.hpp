#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bigjumps/density.hpp"
#include "bigjumps/estimate.hpp"
#include "bigjumps/random.hpp"

namespace bigjumps {

/// W exact Pareto with density c x^{-alpha-1} on [x0, inf), x0 = (c/alpha)^{1/alpha};
/// the row variable is W ∧ n.
struct TruncatedPareto {
  double c = 1.0;
  double alpha = 2.0;
};

/// W Pareto with P(W > x) = c x^{-alpha} for x >= c^{1/alpha}; the row variable
/// is n (1 - exp(-W/n)).
struct SmoothCutoff {
  double c = 1.0;
  double alpha = 2.0;
};

/// Out-degree of a torus vertex: lattice points in an open ball of Pareto(beta) radius.
struct LatticeBall {
  int d = 1;
  double beta = 2.0;
};

/// Support {i n/m : i = 0..m} with fixed probabilities, m = pmf.size() - 1.
struct DiscreteGrid {
  std::vector<double> pmf;
};

using SchemeShape = std::variant<TruncatedPareto, SmoothCutoff, LatticeBall, DiscreteGrid>;

struct SchemeSpec {
  SchemeShape shape;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> mu_limit;

  static SchemeSpec truncated_pareto(double c, double alpha);
  static SchemeSpec smooth_cutoff(double c, double alpha);
  static SchemeSpec lattice_ball(int d, double beta);
  // alpha is optional for grids; functions that need it reject NaN.
  static SchemeSpec discrete_grid(std::vector<double> pmf,
                                  double alpha = std::numeric_limits<double>::quiet_NaN());

  void validate() const;
  std::string kind() const;
  bool is_discrete() const { return std::holds_alternative<DiscreteGrid>(shape); }
  ShapeDensity shape_density() const;
  double require_alpha() const;
};

/// Per-row sampler bound to (spec, n); precomputes everything that depends only
/// on n. Thread-safe for concurrent const use with distinct streams.
class RowSampler {
 public:
  RowSampler(const SchemeSpec& spec, long n);
  ~RowSampler();
  RowSampler(RowSampler&&) noexcept;
  RowSampler& operator=(RowSampler&&) noexcept;

  long n() const { return n_; }
  const SchemeSpec& spec() const { return spec_; }

  double draw(Stream& rng) const;
  double draw_sum(long count, Stream& rng) const;
  void fill(std::span<double> out, Stream& rng) const;

  /// P(W > x), or P(W >= x) when `inclusive`.
  double tail(double x, bool inclusive) const;
  double draw_tail(double x, bool inclusive, Stream& rng) const;
  /// Draw conditioned on W <= x.
  double draw_body(double x, Stream& rng) const;

  /// Exact E W^(n) when available in closed form or by deterministic quadrature.
  std::optional<double> exact_mean() const;

  // Grid schemes only: values are index * grid_step().
  double grid_step() const;
  long grid_points() const;
  long draw_index(Stream& rng) const;
  long long draw_index_sum(long count, Stream& rng) const;
  std::span<const double> pmf() const;

 private:
  struct Impl;
  SchemeSpec spec_;
  long n_;
  std::unique_ptr<Impl> impl_;
};

double sample_w(const SchemeSpec& spec, long n, Stream& rng);

struct SumDraw {
  double sum = 0.0;
  std::vector<double> values;
};
SumDraw sample_sum(const SchemeSpec& spec, long n, Stream& rng, bool keep_vector);

struct SampleBatch {
  long n = 0;
  std::uint64_t seed = 0;
  std::vector<double> sums;
  std::vector<std::vector<double>> vectors;  // filled only when requested
};

struct BatchOptions {
  bool keep_vectors = false;
  unsigned workers = 1;
  std::size_t chunk = 1 << 14;
};

SampleBatch sample_batch(const SchemeSpec& spec, long n, std::size_t replicas, std::uint64_t seed,
                         const BatchOptions& options = {});

double h_eval(const SchemeSpec& spec, double x);

struct MeanEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};
MeanEstimate mean_mu_n(const SchemeSpec& spec, long n, long long samples = 0, std::uint64_t seed = 0);

/// Empirical P(|S_n - n mu_n| > zeta n).
EstimateResult lln_deviation(const SchemeSpec& spec, long n, double zeta, long long samples, std::uint64_t seed,
                             unsigned workers = 1);

struct TailCheckRow {
  long n = 0;
  double empirical = 0.0;
  double std_error = 0.0;
  double predicted = 0.0;  // n^{-alpha} ∫_a^b h
  double ratio = 0.0;
  double ratio_std_error = 0.0;
};

/// Empirical P(a n <= W < b n) against n^{-alpha} ∫_a^b h for each n.
std::vector<TailCheckRow> tail_check(const SchemeSpec& spec, double a, double b, std::span<const long> ns,
                                     long long samples, std::uint64_t seed);

/// Kolmogorov-Smirnov distance between sorted draws and a law given by
/// cdf(x) = P(W <= x) and cdf_left(x) = P(W < x); ties and atoms are handled.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left);

}  // namespace bigjumps
