#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bigjumps/quadrature.hpp"
#include "bigjumps/rare_event.hpp"
#include "bigjumps/scheme.hpp"
#include "bigjumps/torus.hpp"

using namespace bigjumps;

namespace {

// P(W > x) for the Pareto law with density c x^{-alpha-1} on [x0, inf).
double pareto_tail(double c, double alpha, double x) {
  const double x0 = std::pow(c / alpha, 1.0 / alpha);
  return x <= x0 ? 1.0 : (c / alpha) * std::pow(x, -alpha);
}

std::vector<SchemeSpec> builtin_schemes() {
  return {SchemeSpec::truncated_pareto(1.5, 1.5), SchemeSpec::smooth_cutoff(1.0, 1.8), SchemeSpec::lattice_ball(1, 1.5),
          SchemeSpec::lattice_ball(2, 3.0), SchemeSpec::discrete_grid({0.4, 0.3, 0.2, 0.1})};
}

long lattice_n(const SchemeSpec& s, long N) {
  const int d = std::get<LatticeBall>(s.shape).d;
  long n = 1;
  for (int i = 0; i < d; ++i) n *= 2 * N + 1;
  return n;
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS(SchemeSpec::truncated_pareto(1.0, 0.9));
  CHECK_THROWS(SchemeSpec::truncated_pareto(-1.0, 1.5));
  CHECK_THROWS(SchemeSpec::lattice_ball(2, 2.0));
  CHECK_THROWS(SchemeSpec::discrete_grid({0.5, 0.4}));
  CHECK_THROWS(SchemeSpec::discrete_grid({1.1, -0.1}));
  CHECK_NOTHROW(SchemeSpec::discrete_grid({0.5, 0.5 + 5e-13}));
  CHECK(SchemeSpec::lattice_ball(2, 3.0).alpha == doctest::Approx(1.5));
  CHECK_THROWS_AS(RowSampler(SchemeSpec::truncated_pareto(1.5, 1.5), 0), std::invalid_argument);
  CHECK_THROWS_AS(RowSampler(SchemeSpec::lattice_ball(1, 1.5), 10), std::invalid_argument);
  CHECK_NOTHROW(RowSampler(SchemeSpec::lattice_ball(2, 3.0), 121));
}

TEST_CASE("degenerate grids give deterministic sums") {
  Stream rng(1);
  const auto zero = SchemeSpec::discrete_grid({1.0, 0.0, 0.0});
  for (long n : {1L, 7L, 40L}) {
    CHECK(sample_w(zero, n, rng) == 0.0);
    CHECK(sample_sum(zero, n, rng, false).sum == 0.0);
  }
  const auto half = SchemeSpec::discrete_grid({0.0, 1.0, 0.0});
  CHECK(sample_sum(half, 10, rng, true).sum == doctest::Approx(50.0));
  const auto d = sample_sum(half, 10, rng, true);
  CHECK(d.values.size() == 10);
  CHECK(std::all_of(d.values.begin(), d.values.end(), [](double v) { return v == 5.0; }));
}

TEST_CASE("cut-off is active for draws beyond n") {
  RowSampler s(SchemeSpec::truncated_pareto(1.5, 1.5), 100);
  Stream rng(2);
  // Given W > 50 the cut-off atom at n carries mass (50/100)^1.5.
  const int draws = 4000;
  int at_cutoff = 0;
  for (int i = 0; i < draws; ++i) {
    const double w = s.draw_tail(50.0, false, rng);
    CHECK(w > 50.0);
    CHECK(w <= 100.0);
    at_cutoff += w == 100.0;
  }
  const double p = std::pow(0.5, 1.5);
  CHECK(std::abs(at_cutoff / double(draws) - p) < 4 * std::sqrt(p * (1 - p) / draws));
  CHECK(s.draw_tail(100.0, true, rng) == 100.0);
  CHECK_THROWS(s.draw_tail(300.0, false, rng));
}

TEST_CASE("two-point grid sum enumerates to 5/16") {
  const auto spec = SchemeSpec::discrete_grid({0.5, 0.25, 0.25});
  // Enumerate all 9 outcomes of (i, j) with values i, j in {0, 1, 2} (n = 2, m = 2).
  const double p[] = {0.5, 0.25, 0.25};
  double oracle = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i + j == 2) oracle += p[i] * p[j];
  CHECK(oracle == 5.0 / 16);
  CHECK(exact_dp(spec, 2, {2.0, 2.0}) == doctest::Approx(oracle).epsilon(1e-15));
  CHECK(mean_mu_n(spec, 2).value == doctest::Approx(0.75));
  CHECK(mean_mu_n(spec, 2).exact);
}

TEST_CASE("every draw lies in [0, n]") {
  Stream rng(3);
  for (const auto& spec : builtin_schemes()) {
    const long n = spec.kind() == "lattice_ball" ? lattice_n(spec, 6) : 64;
    RowSampler s(spec, n);
    for (int i = 0; i < 200000; ++i) {
      const double w = s.draw(rng);
      REQUIRE(w >= 0.0);
      REQUIRE(w <= static_cast<double>(n));
    }
  }
}

TEST_CASE("batches are reproducible and independent of worker count") {
  for (const auto& spec : builtin_schemes()) {
    const long n = spec.kind() == "lattice_ball" ? lattice_n(spec, 4) : 50;
    BatchOptions one, many;
    one.keep_vectors = many.keep_vectors = true;
    one.chunk = many.chunk = 100;
    many.workers = 4;
    const auto a = sample_batch(spec, n, 1000, 77, one);
    const auto b = sample_batch(spec, n, 1000, 77, many);
    const auto c = sample_batch(spec, n, 1000, 78, one);
    CHECK(a.sums == b.sums);
    CHECK(a.vectors == b.vectors);
    CHECK(a.sums != c.sums);
  }
}

TEST_CASE("truncated Pareto matches its analytic law") {
  const double c = 1.5, alpha = 1.5;
  const auto spec = SchemeSpec::truncated_pareto(c, alpha);
  SUBCASE("P(W >= n/2) including the atom") {
    for (long n : {100L, 10000L}) {
      RowSampler s(spec, n);
      Stream rng(static_cast<std::uint64_t>(n));
      const long draws = n == 100 ? 1'000'000 : 20'000'000;
      long hits = 0;
      for (long i = 0; i < draws; ++i) hits += s.draw(rng) >= 0.5 * static_cast<double>(n);
      // Density part ∫_{n/2}^{n} + atom at n = tail at n/2.
      const double exact = pareto_tail(c, alpha, 0.5 * static_cast<double>(n));
      const double p = static_cast<double>(hits) / static_cast<double>(draws);
      CHECK(std::abs(p - exact) < 4 * std::sqrt(exact * (1 - exact) / static_cast<double>(draws)));
      CHECK(s.tail(0.5 * static_cast<double>(n), true) == doctest::Approx(exact));
    }
  }
  SUBCASE("Kolmogorov-Smirnov distance on 10^6 draws") {
    const long n = 1000;
    RowSampler s(spec, n);
    Stream rng(12);
    std::vector<double> draws(1'000'000);
    s.fill(draws, rng);
    std::sort(draws.begin(), draws.end());
    const double nd = static_cast<double>(n);
    auto cdf = [&](double x) { return x >= nd ? 1.0 : 1.0 - pareto_tail(c, alpha, x); };
    auto cdf_left = [&](double x) { return x > nd ? 1.0 : 1.0 - pareto_tail(c, alpha, x); };
    const double ks = ks_statistic(draws, cdf, cdf_left);
    MESSAGE("KS = " << ks);
    CHECK(ks < 0.002);
  }
  SUBCASE("closed-form mean against quadrature of the survival function") {
    for (long n : {10L, 256L, 100000L}) {
      const double nd = static_cast<double>(n);
      // E[W ∧ n] = ∫_0^n P(W > x) dx
      const double x0 = std::pow(c / alpha, 1.0 / alpha);
      const double oracle =
          x0 + integrate_panels([&](double t) { return pareto_tail(c, alpha, x0 * std::exp(t)) * x0 * std::exp(t); },
                                0.0, std::log(nd / x0), 2000, 10);
      CHECK(mean_mu_n(spec, n).value == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
}

TEST_CASE("shape densities at the stated points") {
  CHECK(h_eval(SchemeSpec::truncated_pareto(1.5, 1.5), 0.5) == doctest::Approx(1.5 * std::pow(0.5, -2.5)));
  CHECK(h_eval(SchemeSpec::truncated_pareto(1.5, 1.5), 0.5) == doctest::Approx(8.4853).epsilon(1e-5));
  const double c = 0.7, alpha = 1.6;
  CHECK(h_eval(SchemeSpec::smooth_cutoff(c, alpha), 1.0 - std::exp(-1.0)) == doctest::Approx(c * alpha * std::exp(1.0)));
  CHECK(h_eval(SchemeSpec::lattice_ball(1, 1.5), 0.4) == doctest::Approx(h_lattice(1, 1.5, 0.4)));
  CHECK_THROWS_AS(h_eval(SchemeSpec::truncated_pareto(1.5, 1.5), 0.0), std::domain_error);
  CHECK_THROWS_AS(h_eval(SchemeSpec::truncated_pareto(1.5, 1.5), 1.0), std::domain_error);
  CHECK_THROWS(h_eval(SchemeSpec::discrete_grid({0.5, 0.5}), 0.5));
}

TEST_CASE("smooth cut-off and lattice means against Monte Carlo") {
  for (const auto& spec : {SchemeSpec::smooth_cutoff(1.0, 1.8), SchemeSpec::lattice_ball(2, 3.0)}) {
    const long n = spec.kind() == "lattice_ball" ? 121 : 200;
    const auto exact = mean_mu_n(spec, n);
    CHECK(exact.exact);
    RowSampler s(spec, n);
    Stream rng(5);
    double sum = 0.0, sq = 0.0;
    const int draws = 2'000'000;
    for (int i = 0; i < draws; ++i) {
      const double w = s.draw(rng);
      sum += w;
      sq += w * w;
    }
    const double m = sum / draws;
    const double se = std::sqrt((sq / draws - m * m) / draws);
    CHECK(std::abs(m - exact.value) < 4 * se);
  }
}

TEST_CASE("conditional draws respect their conditioning") {
  Stream rng(6);
  for (const auto& spec : builtin_schemes()) {
    const long n = spec.kind() == "lattice_ball" ? lattice_n(spec, 5) : 60;
    RowSampler s(spec, n);
    const double x = 0.3 * static_cast<double>(n);
    const double t = s.tail(x, false);
    const double ti = s.tail(x, true);
    CHECK(ti >= t);
    long above = 0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
      if (t > 0) CHECK(s.draw_tail(x, false, rng) > x);
      CHECK(s.draw_body(x, rng) <= x);
      above += s.draw(rng) > x;
    }
    const double p = static_cast<double>(above) / draws;
    CHECK(std::abs(p - t) < 4 * std::sqrt(t * (1 - t) / draws) + 1e-12);
  }
}

TEST_CASE("law of large numbers deviations") {
  const auto point = SchemeSpec::discrete_grid({0.0, 1.0, 0.0});
  CHECK(lln_deviation(point, 40, 0.01, 1000, 1).prob == 0.0);
  // Symmetric grid around its mean with zeta beyond the largest possible deviation.
  const auto sym = SchemeSpec::discrete_grid({0.25, 0.5, 0.25});
  CHECK(lln_deviation(sym, 20, 10.0, 1000, 1).prob == 0.0);
  CHECK_THROWS(lln_deviation(sym, 20, 0.1, 50, 1));
  const auto tp = SchemeSpec::truncated_pareto(1.5, 1.5);
  std::vector<EstimateResult> r;
  for (long n : {256L, 1024L, 4096L}) r.push_back(lln_deviation(tp, n, 0.05, 20000, 3));
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    CHECK(r[i + 1].prob <= r[i].prob + 2 * std::hypot(r[i].std_error, r[i + 1].std_error));
}

TEST_CASE("windowed tail probabilities approach n^-alpha times the mass of h") {
  const std::vector<long> ns{256, 1024, 4096};
  SUBCASE("truncated Pareto and smooth cut-off are exact for interior windows") {
    for (const auto& spec : {SchemeSpec::truncated_pareto(1.5, 1.5), SchemeSpec::smooth_cutoff(1.0, 1.8)}) {
      for (auto [a, b] : {std::pair{0.2, 0.5}, std::pair{0.5, 0.95}}) {
        const auto rows = tail_check(spec, a, b, ns, 1'000'000, 8);
        for (const auto& r : rows) CHECK(std::abs(r.ratio - 1.0) < 3 * r.ratio_std_error);
      }
    }
  }
  SUBCASE("lattice balls converge in n") {
    const std::vector<long> lat{257, 1025, 4097};
    const auto rows = tail_check(SchemeSpec::lattice_ball(1, 1.5), 0.3, 0.8, lat, 2'000'000, 9);
    CHECK(std::abs(rows.back().ratio - 1.0) <= std::max(3 * rows.back().ratio_std_error, std::abs(rows.front().ratio - 1.0)));
  }
}
