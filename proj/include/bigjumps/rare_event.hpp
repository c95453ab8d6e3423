#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bigjumps/density.hpp"
#include "bigjumps/estimate.hpp"
#include "bigjumps/krho.hpp"
#include "bigjumps/scheme.hpp"

namespace bigjumps {

/// Width of [rho1(n), rho2(n)]: fixed w, or w0 n^{-gamma}.
struct WidthRule {
  enum class Kind { fixed, power };
  Kind kind = Kind::fixed;
  double w0 = 0.1;
  double gamma = 0.0;

  static WidthRule fixed(double w) { return {Kind::fixed, w, 0.0}; }
  static WidthRule power(double w0, double gamma) { return {Kind::power, w0, gamma}; }
  double width(long n) const;
  std::string describe() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Target excess rho with k = ceil(rho); bounds are centred on rho unless given explicitly.
class RhoWindow {
 public:
  // alpha is used only to check the power rule (gamma < min(1, alpha - 1)); NaN skips it.
  RhoWindow(double rho, WidthRule rule, double alpha = std::numeric_limits<double>::quiet_NaN());
  static RhoWindow between(double rho1, double rho2);

  double rho() const { return rho_; }
  int k() const { return k_; }
  const WidthRule& rule() const { return rule_; }
  std::pair<double, double> bounds(long n) const;
  double width(long n) const;

 private:
  RhoWindow() = default;
  double rho_ = 0.5;
  int k_ = 1;
  WidthRule rule_;
  std::optional<std::pair<double, double>> explicit_;
};

/// I_n = [n (rho1 + mu), n (rho2 + mu)].
Interval interval_for(const RhoWindow& window, long n, double mu);

double default_eps(double rho, double alpha);

struct RunOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

EstimateResult estimate_naive(const SchemeSpec& spec, long n, const Interval& interval, long long samples,
                              const RunOptions& options = {});
EstimateResult estimate_naive(const SchemeSpec& spec, long n, const RhoWindow& window, double mu_ref,
                              long long samples, const RunOptions& options = {});

/// Distribution of the grid index sum of n grid draws (length n m + 1).
std::vector<double> exact_sum_pmf(const SchemeSpec& spec, long n);
double exact_dp(const SchemeSpec& spec, long n, const Interval& interval);

double theorem1_rhs(long n, int k, double alpha, double width, double krho);
double theorem1_rhs(const SchemeSpec& spec, long n, const RhoWindow& window, const KrhoResult& krho);

/// P(n sigma1 <= T_k <= n sigma2) for T_k a sum of k row variables. Every
/// coordinate must exceed n(sigma1 - (k-1)), so draws are taken from the tail
/// beyond that point and reweighted by its exact probability.
EstimateResult tk_window_prob(const SchemeSpec& spec, int k, long n, double sigma1, double sigma2,
                              long long samples, const RunOptions& options = {});

struct StructuredOptions {
  double slack = std::numeric_limits<double>::infinity();
  long long bulk_samples = 0;  // 0: samples / 4
};

/// C(n,k) P(first k big, rest small, S_n in I_n), estimated as
/// C(n,k) q_big q_small E[1{|B - (n-k) mu| <= slack} P(T_k in I_n - B | big)]
/// with B the bulk sum of n-k coordinates conditioned on staying <= eps n.
/// Configurations with more or fewer than k big jumps are left out.
EstimateResult estimate_structured(const SchemeSpec& spec, long n, const RhoWindow& window, double mu_ref,
                                   double eps, long long samples, const RunOptions& options = {},
                                   const StructuredOptions& structured = {});

struct JumpProfile {
  long n = 0;
  std::vector<std::pair<long, double>> big_jumps;  // (index, value), value descending
  double bulk_sum = 0.0;
  double s_n = 0.0;
};

/// Splits a row at eps n; values equal to eps n stay in the bulk.
JumpProfile decompose(std::span<const double> row, double threshold);

struct ProfileRun {
  std::vector<JumpProfile> profiles;
  long long samples = 0;
  bool exhausted = false;  // max_samples reached before target_hits
};

ProfileRun conditional_profiles(const SchemeSpec& spec, long n, const Interval& interval, double eps,
                                std::size_t target_hits, long long max_samples, const RunOptions& options = {});
ProfileRun conditional_profiles(const SchemeSpec& spec, long n, const RhoWindow& window, double mu_ref, double eps,
                                std::size_t target_hits, long long max_samples, const RunOptions& options = {});

double corollary1_fraction(std::span<const JumpProfile> profiles, int k, double gamma, double mu_ref, double rho);

/// Fraction of profiles with at least `count` big jumps.
double big_jump_fraction(std::span<const JumpProfile> profiles, int count);

struct GofResult {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;  // NaN when no point is usable
  int bins_used = 0;
  std::size_t used = 0;
  std::size_t skipped = 0;  // profiles without exactly k big jumps
  std::size_t clamped = 0;  // points outside the binned range, moved to the edge bin
  std::vector<double> observed, expected;
  std::string note;
};

/// Chi-square test of points (first k-1 normalized jumps) against
/// jump_density / krho, with `bins` cells in total.
GofResult gof_points(std::span<const std::vector<double>> points, const ShapeDensity& h, double rho, int k,
                     double krho, int bins, double tol = 1e-7);
GofResult corollary2_gof(std::span<const JumpProfile> profiles, const ShapeDensity& h, double rho, int k,
                         double krho, int bins, std::uint64_t seed = 1);

struct SweepRow {
  long n = 0;
  std::string method;
  double prob = 0.0;
  double std_error = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::string error;
};

struct SweepOptions {
  RunOptions run;
  bool structured = false;
  std::optional<double> eps;          // default_eps when empty
  std::optional<double> krho;         // computed from the scheme's h when empty
  double krho_tol = 1e-8;
};

/// Per n: naive estimate (exact_dp for grid schemes), optionally the structured
/// estimate, the limit right-hand side and their ratio. I_n is centred at n mu_n.
std::vector<SweepRow> ratio_sweep(const SchemeSpec& spec, double rho, const WidthRule& rule,
                                  std::span<const long> ns, long long samples_per_n, const SweepOptions& options = {});

}  // namespace bigjumps
