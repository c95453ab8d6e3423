// Acceptance run: one PASS/FAIL line per criterion, diagnostics indented
// underneath. Optional arguments select criteria by name (A1 ... A9).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "bigjumps/io.hpp"
#include "bigjumps/krho.hpp"
#include "bigjumps/rare_event.hpp"
#include "bigjumps/scheme.hpp"
#include "bigjumps/torus.hpp"

using namespace bigjumps;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string summary;
};

template <typename... Args>
void note(Args&&... args) {
  std::ostringstream line;
  (line << ... << args);
  std::cout << "    " << line.str() << std::endl;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

unsigned workers() { return default_workers(); }

// --- A1: naive Monte Carlo against the exact grid distribution -------------------------

Verdict a1() {
  Stream rng(20240101);
  int agree = 0;
  const int cases = 50;
  for (int c = 0; c < cases; ++c) {
    const long n = 2 + static_cast<long>(rng.uniform() * 63);   // 2..64
    const int m = 1 + static_cast<int>(rng.uniform() * 16);     // 1..16
    std::vector<double> pmf(static_cast<std::size_t>(m + 1));
    for (auto& p : pmf) p = -std::log(rng.uniform());            // flat Dirichlet
    const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    for (auto& p : pmf) p /= total;
    const auto spec = SchemeSpec::discrete_grid(pmf);
    // Interval around the mean, a few standard deviations wide, with random offset.
    double mean = 0.0, second = 0.0;
    const double step = static_cast<double>(n) / m;
    for (int i = 0; i <= m; ++i) {
      mean += pmf[static_cast<std::size_t>(i)] * i * step;
      second += pmf[static_cast<std::size_t>(i)] * i * step * i * step;
    }
    const double sd = std::sqrt(std::max(0.0, second - mean * mean) * n);
    const double centre = n * mean + (rng.uniform() * 4 - 2) * sd;
    const double half = (0.1 + rng.uniform()) * sd;
    const Interval I{centre - half, centre + half};
    const double exact = exact_dp(spec, n, I);
    const auto est = estimate_naive(spec, n, I, 1'000'000, {stream_key(7, c), workers()});
    const double se = std::sqrt(exact * (1 - exact) / 1e6);
    const bool ok = std::abs(est.prob - exact) <= 4 * se;
    agree += ok;
    if (!ok) note("case ", c, ": n=", n, " m=", m, " exact=", fmt(exact), " naive=", fmt(est.prob), " se=", fmt(se));
  }
  return {agree >= 48, std::to_string(agree) + "/50 within 4 binomial standard errors (need >= 48)"};
}

// --- A2: K_rho in the analytic cases and grid vs Monte Carlo ---------------------------

Verdict a2() {
  const auto u = densities::uniform();
  const auto k2 = krho_eval(u, 1.5, 2, 1e-9);
  const auto k3 = krho_eval(u, 2.5, 3, 1e-9);
  const auto tp = densities::truncated_pareto(1.5, 1.5);
  const auto k1 = krho_eval(tp, 0.5, 1, 1e-9);
  note("uniform k=2 rho=1.5: ", fmt(k2.value, 12));
  note("uniform k=3 rho=2.5: ", fmt(k3.value, 12), " (area of {x1+x2 > 1.5} in the unit square is 0.125)");
  const bool c1 = std::abs(k2.value - 0.5) <= 1e-6;
  const bool c2 = std::abs(k3.value - 0.75) <= 1e-5;
  const bool c3 = k1.value == tp(0.5);
  const auto grid = krho_eval(tp, 1.5, 2, 1e-8);
  KrhoOptions mc;
  mc.method = KrhoMethod::monte_carlo;
  mc.seed = 11;
  const auto sim = krho_eval(tp, 1.5, 2, 1e-4 * grid.value, mc);
  note("truncated Pareto (1.5, 1.5) k=2: grid ", fmt(grid.value, 10), " ± ", fmt(grid.abs_error_bound, 2),
       ", Monte Carlo ", fmt(sim.value, 10), " ± ", fmt(sim.abs_error_bound, 2));
  const bool c4 = std::abs(grid.value - sim.value) <= grid.abs_error_bound + sim.abs_error_bound;
  std::ostringstream s;
  s << "k=2 uniform " << (c1 ? "ok" : "off") << "; k=3 uniform vs 0.75 " << (c2 ? "ok" : "off (got " + fmt(k3.value) + ")")
    << "; k=1 exact " << (c3 ? "ok" : "off") << "; grid/MC " << (c4 ? "agree" : "disagree");
  return {c1 && c2 && c3 && c4, s.str()};
}

// --- A3: ratio to the limit formula, single big jump -------------------------------------

Verdict a3() {
  const auto spec = SchemeSpec::truncated_pareto(1.5, 1.5);
  const std::vector<long> ns{64, 256, 1024, 4096};
  SweepOptions opt;
  opt.run = {31, workers()};
  opt.structured = true;
  opt.eps = 0.2;
  const auto rows = ratio_sweep(spec, 0.5, WidthRule::fixed(0.1), ns, 1'000'000, opt);
  std::vector<double> ratio;
  bool positive = true;
  for (const auto& r : rows) {
    note("n=", r.n, " ", r.method, ": P=", fmt(r.prob), " ± ", fmt(r.std_error, 2), " rhs=", fmt(r.rhs),
         " ratio=", fmt(r.ratio), r.error.empty() ? "" : " error: " + r.error);
    if (r.method == "naive") {
      ratio.push_back(r.ratio);
      positive = positive && r.ratio > 0;
    }
  }
  if (ratio.size() != ns.size()) return {false, "missing rows"};
  const double first = std::abs(ratio.front() - 1), last = std::abs(ratio.back() - 1);
  std::ostringstream s;
  s << "|ratio-1| " << fmt(first, 4) << " at n=64 -> " << fmt(last, 4) << " at n=4096 (need smaller and <= 0.35)";
  return {positive && last < first && last <= 0.35, s.str()};
}

// --- A4: conditioned structure, single big jump ---------------------------------------

Verdict a4() {
  const auto spec = SchemeSpec::truncated_pareto(1.5, 1.5);
  const double rho = 0.5;
  const double eps = default_eps(rho, 1.5);
  const RhoWindow w(rho, WidthRule::fixed(0.1));
  std::vector<double> two_or_more;
  double cor1 = 0.0;
  for (long n : {64L, 512L}) {
    const double mu = mean_mu_n(spec, n).value;
    const auto run = conditional_profiles(spec, n, w, mu, eps, 300, 200'000'000, {41, workers()});
    std::vector<int> hist(8, 0);
    for (const auto& p : run.profiles) ++hist[std::min<std::size_t>(7, p.big_jumps.size())];
    std::ostringstream h;
    for (int i = 0; i < 8; ++i) h << (i ? " " : "") << hist[static_cast<std::size_t>(i)];
    const double f1 = corollary1_fraction(run.profiles, 1, 0.1, mu, rho);
    note("n=", n, " eps=", fmt(eps, 4), " (eps n=", fmt(eps * n, 4), "): ", run.profiles.size(), " profiles from ",
         run.samples, " rows; big-jump count histogram 0..7+: ", h.str(), "; exactly-1 fraction ", fmt(f1, 4));
    if (run.profiles.size() < 300) return {false, "fewer than 300 hits at n=" + std::to_string(n)};
    two_or_more.push_back(big_jump_fraction(run.profiles, 2));
    if (n == 512) cor1 = f1;
  }
  // Diagnostic: the same fraction at a larger threshold.
  const double mu512 = mean_mu_n(spec, 512).value;
  const auto wide = conditional_profiles(spec, 512, w, mu512, 0.25, 300, 200'000'000, {41, workers()});
  note("diagnostic eps=0.25 at n=512: exactly-1 fraction ", fmt(corollary1_fraction(wide.profiles, 1, 0.1, mu512, rho), 4));
  std::ostringstream s;
  s << "exactly-1 fraction at n=512 " << fmt(cor1, 4) << " (need >= 0.9); >=2 big jumps " << fmt(two_or_more[0], 4)
    << " at n=64 -> " << fmt(two_or_more[1], 4) << " at n=512 (need decrease)";
  return {cor1 >= 0.9 && two_or_more[1] < two_or_more[0], s.str()};
}

// --- A5: conditioned jump sizes against the limit density ---------------------------

Verdict a5() {
  const auto spec = SchemeSpec::truncated_pareto(1.2, 1.2);
  const auto h = spec.shape_density();
  const double rho = 1.5;
  const int k = 2;
  const long n = 256;
  const double K = krho_eval(h, rho, k, 1e-9).value;
  const double eps = default_eps(rho, 1.2);
  const double mu = mean_mu_n(spec, n).value;
  const auto run = conditional_profiles(spec, n, RhoWindow(rho, WidthRule::fixed(0.2)), mu, eps, 300, 200'000'000,
                                        {51, workers()});
  const auto g = corollary2_gof(run.profiles, h, rho, k, K, 8, 52);
  note("eps=", fmt(eps, 4), " (eps n=", fmt(eps * n, 4), "), ", run.profiles.size(), " profiles, used ", g.used,
       ", skipped ", g.skipped, ", chi2=", fmt(g.chi2), " dof=", g.dof, " p=", fmt(g.p_value));
  // Diagnostic: the two largest jumps of every profile, against the same density.
  std::vector<std::vector<double>> top2;
  std::size_t at_cap = 0;
  Stream pick(54);
  for (const auto& p : run.profiles) {
    if (p.big_jumps.size() < 2) continue;
    const double a = p.big_jumps[0].second / n, b = p.big_jumps[1].second / n;
    at_cap += a >= 1.0;
    top2.push_back({pick.uniform() < 0.5 ? a : b});
  }
  if (!top2.empty()) {
    const auto d = gof_points(top2, h, rho, k, K, 8);
    note("diagnostic: two largest jumps of ", top2.size(), " profiles: p=", fmt(d.p_value), "; largest jump at the cut-off in ",
         at_cap, " of them");
  }
  const auto Ka = krho_eval_with_atom(h, rho, k, 1e-9).value;
  note("diagnostic: K without atom ", fmt(K), ", with the cut-off atom ", fmt(Ka), " (share of atom configurations ",
       fmt(1 - K / Ka, 4), ")");
  const bool observed = g.used > 0 && std::isfinite(g.p_value) && g.p_value >= 0.01;

  int calibrated = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto draws = sample_limit_jumps(h, rho, k, 300, stream_key(53, rep));
    std::vector<std::vector<double>> pts;
    for (const auto& v : draws) pts.push_back({v[0]});
    calibrated += gof_points(pts, h, rho, k, K, 8).p_value >= 0.01;
  }
  std::ostringstream s;
  s << "conditioned p=" << fmt(g.p_value, 4) << " on " << g.used << " usable profiles (need >= 0.01); calibration "
    << calibrated << "/100 with p >= 0.01 (need >= 95)";
  return {observed && calibrated >= 95, s.str()};
}

// --- A6: local limit for the sum of k big jumps ----------------------------------------

Verdict a6() {
  const auto spec = SchemeSpec::truncated_pareto(1.2, 1.2);
  const auto h = spec.shape_density();
  const double rho = 1.5, s1 = 1.4, s2 = 1.6, alpha = 1.2;
  const double K = krho_eval(h, rho, 2, 1e-9).value;
  const double Ka = krho_eval_with_atom(h, rho, 2, 1e-9).value;
  std::vector<double> r, se;
  for (long n : {256L, 1024L, 4096L}) {
    const auto est = tk_window_prob(spec, 2, n, s1, s2, 4'000'000, {61, workers()});
    const double scale = (s2 - s1) * std::pow(static_cast<double>(n), -2 * alpha) * K;
    r.push_back(est.prob / scale);
    se.push_back(est.std_error / scale);
    note("n=", n, ": P=", fmt(est.prob), " ratio=", fmt(r.back()), " ± ", fmt(se.back(), 2),
         "; with the cut-off atom in the constant ", fmt(est.prob / scale * K / Ka));
  }
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    monotone = monotone && std::abs(r[i + 1] - 1) <= std::abs(r[i] - 1) + 2 * std::hypot(se[i], se[i + 1]);
  const bool progress = std::abs(r.front() - 1) - std::abs(r.back() - 1) > 2 * std::hypot(se.front(), se.back());
  std::ostringstream s;
  s << "ratios " << fmt(r[0], 5) << ", " << fmt(r[1], 5) << ", " << fmt(r[2], 5)
    << (monotone ? "; |ratio-1| non-increasing within 2 se" : "; |ratio-1| increases beyond 2 se")
    << (progress ? "; moves toward 1" : "; no significant movement toward 1");
  return {monotone && progress, s.str()};
}

// --- A7: lattice geometry and tails ----------------------------------------------------

Verdict a7() {
  const fs::path dir = fs::temp_directory_path() / "bigjumps_acceptance";
  fs::create_directories(dir);
  const fs::path report_path = dir / "calibrate_d1.json";
  const std::string cmd = std::string("'") + BIGJUMPS_CLI +
                          "' calibrate-h --d 1 --beta 1.5 --a 0.5 --N 128,512,2048 --samples 1000000 --seed 71 --out '" +
                          report_path.string() + "' > /dev/null";
  const int status = std::system(cmd.c_str());
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "calibrate-h failed"};
  const auto report = read_json(report_path);
  const double analytic = lattice_tail_constant(1, 1.5);
  const double predicted = analytic * std::pow(0.5, -1.5);
  bool tails = true;
  for (const auto& row : report.at("rows")) {
    const double v = row.at("scaled_tail").get<double>(), e = row.at("std_error").get<double>();
    const bool ok = std::abs(v - predicted) <= 3 * e;
    tails = tails && ok;
    note("N=", row.at("N").get<long>(), ": n^beta P(W >= n/2) = ", fmt(v), " ± ", fmt(e, 2), " vs ", fmt(predicted),
         ok ? "" : "  (outside 3 se)");
  }
  const bool reported = report.contains("alternative_constant") && report.contains("analytic_constant") &&
                        report.at("rows").size() == 3 && report.at("rows")[0].contains("measured_constant");
  note("report: analytic constant ", fmt(report.at("analytic_constant").get<double>()), ", alternative form ",
       report.at("alternative_form").get<std::string>(), " = ", fmt(report.at("alternative_constant").get<double>()));

  const double g = g_eval(2, 1.0 / std::numbers::sqrt2);
  const bool geometry = std::abs(g - std::numbers::pi / 4) <= 1e-8;
  note("g_2(1/sqrt 2) - pi/4 = ", fmt(g - std::numbers::pi / 4, 3));

  bool sandwich = true;
  Stream rng(72);
  for (int d = 1; d <= 3; ++d) {
    const long N = d == 1 ? 300 : d == 2 ? 40 : 12;
    ShellTable shells(d, N);
    const double c = sandwich_constant(d);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      // Half the radii spread uniformly over the whole torus scale, half Pareto.
      const double R = i % 2 ? rng.uniform() * 1.05 * std::sqrt(static_cast<double>(d)) * N : sample_radius(1.0, rng);
      const double count = static_cast<double>(shells.count_below(R));
      const double volume = std::pow(2.0 * N, d) * g_eval(d, R / (std::sqrt(static_cast<double>(d)) * N));
      const double slack = c * std::pow(static_cast<double>(N), d - 1);
      worst = std::max(worst, std::abs(count - volume) / std::pow(static_cast<double>(N), d - 1));
      sandwich = sandwich && std::abs(count - volume) <= slack;
    }
    note("sandwich d=", d, " N=", N, ": worst |count - volume|/N^(d-1) = ", fmt(worst, 4), " (c_d = ", c, ")");
  }
  std::ostringstream s;
  s << "tails " << (tails ? "within 3 se" : "off") << "; report " << (reported ? "complete" : "incomplete")
    << "; g(1/sqrt 2) " << (geometry ? "ok" : "off") << "; sandwich " << (sandwich ? "holds" : "violated");
  return {tails && reported && geometry && sandwich, s.str()};
}

// --- A8: graph conservation and in-degree dispersion ---------------------------------------

Verdict a8() {
  const std::vector<long> Ns{16, 32, 64};
  bool conserved = true;
  int decreasing = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<double> share;
    for (long N : Ns) {
      GraphOptions opt;
      opt.workers = workers();
      const auto g = generate_graph({2, N, 3.0, seed}, opt);
      const long long out = std::accumulate(g.out_degrees.begin(), g.out_degrees.end(), 0LL);
      const long long in = std::accumulate(g.in_degrees.begin(), g.in_degrees.end(), 0LL);
      conserved = conserved && out == in && out == g.edge_count;
      share.push_back(condensation_stats(g, 1, 0.1).max_in_share);
    }
    const bool dec = share[0] > share[1] && share[1] > share[2];
    decreasing += dec;
    if (!dec) note("seed ", seed, ": max_in_share ", fmt(share[0], 4), ", ", fmt(share[1], 4), ", ", fmt(share[2], 4));
  }
  const TorusConfig cfg{2, 16, 3.0, 5};
  GraphOptions opt;
  opt.planted = {{0, 16 * std::numbers::sqrt2 + 0.5}};
  const auto g = generate_graph(cfg, opt);
  const auto stats = condensation_stats(g, 1, 0.5);
  const double n = static_cast<double>(cfg.n());
  const bool planted = stats.big_out_count >= 1 && stats.top_k_out_share == (n - 1) / n;
  note("planted: big_out_count ", stats.big_out_count, ", top share ", fmt(stats.top_k_out_share, 12), " vs ",
       fmt((n - 1) / n, 12));
  std::ostringstream s;
  s << "sums " << (conserved ? "conserved" : "NOT conserved") << "; max_in_share strictly decreasing in " << decreasing
    << "/20 seeds (need >= 16); planted " << (planted ? "ok" : "off");
  return {conserved && decreasing >= 16 && planted, s.str()};
}

// --- A9: law of large numbers --------------------------------------------------------------

Verdict a9() {
  const auto spec = SchemeSpec::truncated_pareto(1.5, 1.5);
  std::vector<EstimateResult> r;
  for (long n : {256L, 1024L, 4096L}) {
    r.push_back(lln_deviation(spec, n, 0.05, 40000, 91, workers()));
    note("n=", n, ": P(|S_n - n mu_n| > 0.05 n) = ", fmt(r.back().prob), " ± ", fmt(r.back().std_error, 2));
  }
  bool ok = true;
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    ok = ok && r[i + 1].prob <= r[i].prob + 2 * std::hypot(r[i].std_error, r[i + 1].std_error);
  return {ok, ok ? "non-increasing within 2 se" : "increases beyond 2 se"};
}

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{{"A1", 120, a1}, {"A2", 60, a2},  {"A3", 900, a3},
                                   {"A4", 600, a4}, {"A5", 1200, a5}, {"A6", 300, a6},
                                   {"A7", 300, a7}, {"A8", 600, a8},  {"A9", 120, a9}};
  std::set<std::string> selected(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.name)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::cout << c.name << ' ' << (pass ? "PASS" : "FAIL") << ": " << v.summary << " [" << fmt(secs, 3) << " s of "
              << c.budget_seconds << " s" << (in_time ? "" : ", over budget") << "]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
