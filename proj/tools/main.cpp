// Command-line entry point. Every subcommand writes its outputs plus a
// <output>.manifest.json with the full parameter set.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bigjumps/io.hpp"
#include "bigjumps/krho.hpp"
#include "bigjumps/rare_event.hpp"
#include "bigjumps/scheme.hpp"
#include "bigjumps/torus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bigjumps;

namespace {

struct Common {
  std::string out_dir;
  unsigned workers = default_workers();
  std::uint64_t seed = 1;
};

fs::path resolve(const Common& common, const std::string& name) {
  const fs::path p(name);
  if (p.is_absolute() || common.out_dir.empty()) return p;
  return fs::path(common.out_dir) / p;
}

json params_of(const CLI::App* app) {
  json j = json::object();
  for (const auto* opt : app->get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    const auto& res = opt->results();
    std::string key = opt->get_name();
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (opt->get_expected_max() == 0)
      j[key] = true;
    else if (res.size() == 1)
      j[key] = res.front();
    else
      j[key] = res;
  }
  return j;
}

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void write_manifest(const fs::path& output, const std::string& subcommand, json params, std::uint64_t seed,
                    const Clock& clock) {
  fs::path m = output;
  m += ".manifest.json";
  write_json(m, make_manifest(subcommand, params, seed, clock.seconds()));
}

struct SchemeArg {
  std::string path;
  SchemeSpec spec;
  json echo;
};

SchemeArg load_scheme(const std::string& path) {
  SchemeArg s;
  s.path = path;
  const auto cfg = Config::load(path);
  s.spec = scheme_from_config(cfg);
  s.echo = json{{"file", path}, {"values", cfg.values}};
  return s;
}

std::vector<long> parse_ns(const std::vector<long>& ns) {
  for (long n : ns)
    if (n < 1) throw std::invalid_argument("n values must be positive");
  return ns;
}

void print(const json& j) { std::cout << j.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and numerical checks for big-jump large deviations of cut-off heavy-tailed sums"};
  app.require_subcommand(1);
  Common common;
  if (const char* env = std::getenv("BIGJUMPS_OUT_DIR")) common.out_dir = env;
  app.add_option("--out-dir", common.out_dir, "Directory for relative output paths (default $BIGJUMPS_OUT_DIR)");
  app.add_option("--workers", common.workers, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  std::function<void()> action;
  std::string ran;
  Clock clock;

  // krho ---------------------------------------------------------------------------
  auto* krho = app.add_subcommand("krho", "Evaluate the condensation constant K_rho");
  struct {
    std::string scheme, h, h_file, method, out;
    double rho = 0, tol = 0;
    int k = 0;
    bool atom = false;
    std::uint64_t seed = 1;
  } kr;
  krho->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  auto* kh = krho->add_option("--h", kr.h, "Built-in h: uniform")->check(CLI::IsMember({"uniform"}));
  auto* ks = krho->add_option("--scheme", kr.scheme, "Scheme config file (h of the scheme)")->check(CLI::ExistingFile);
  auto* kf = krho->add_option("--h-file", kr.h_file, "Tabulated h: lines of 'x h'")->check(CLI::ExistingFile);
  kh->excludes(ks)->excludes(kf);
  ks->excludes(kf);
  krho->add_option("--rho", kr.rho)->required();
  krho->add_option("--k", kr.k)->required();
  krho->add_option("--tol", kr.tol)->required();
  krho->add_option("--method", kr.method)->check(CLI::IsMember({"closed_form", "grid", "monte_carlo"}));
  krho->add_option("--seed", kr.seed);
  krho->add_flag("--with-atom", kr.atom, "Include the cut-off atom of the scheme");
  krho->add_option("--out", kr.out, "Also write the result as JSON");
  krho->callback([&] {
    if (kr.h.empty() && kr.scheme.empty() && kr.h_file.empty())
      throw CLI::RequiredError("one of --h, --scheme, --h-file");
    action = [&] {
      ShapeDensity h;
      json extra;
      if (!kr.h.empty()) h = densities::uniform();
      if (!kr.h_file.empty()) h = densities::load_tabulated(kr.h_file);
      if (!kr.scheme.empty()) {
        auto s = load_scheme(kr.scheme);
        h = s.spec.shape_density();
        extra = s.echo;
      }
      KrhoOptions opt;
      opt.seed = kr.seed;
      if (!kr.method.empty()) opt.method = krho_method_from_string(kr.method);
      const auto r = kr.atom ? krho_eval_with_atom(h, kr.rho, kr.k, kr.tol, opt) : krho_eval(h, kr.rho, kr.k, kr.tol, opt);
      const auto j = to_json(r);
      print(j);
      if (!kr.out.empty()) {
        const auto path = resolve(common, kr.out);
        write_json(path, j);
        auto params = params_of(krho);
        if (!extra.is_null()) params["scheme_config"] = extra;
        write_manifest(path, "krho", params, kr.seed, clock);
      }
    };
  });

  // tail-check ---------------------------------------------------------------------
  auto* tail = app.add_subcommand("tail-check", "Empirical P(an <= W < bn) against n^-alpha times the integral of h");
  struct {
    std::string scheme, out;
    double a = 0, b = 0;
    std::vector<long> ns;
    long long samples = 1'000'000;
    std::uint64_t seed = 1;
  } tc;
  tail->add_option("--scheme", tc.scheme)->required()->check(CLI::ExistingFile);
  tail->add_option("--a", tc.a)->required();
  tail->add_option("--b", tc.b)->required();
  tail->add_option("--n", tc.ns)->required()->delimiter(',');
  tail->add_option("--samples", tc.samples);
  tail->add_option("--seed", tc.seed);
  tail->add_option("--out", tc.out)->required();
  tail->callback([&] {
    action = [&] {
      auto s = load_scheme(tc.scheme);
      const auto rows = tail_check(s.spec, tc.a, tc.b, parse_ns(tc.ns), tc.samples, tc.seed);
      const auto path = resolve(common, tc.out);
      std::ostringstream csv;
      csv.precision(17);
      csv << "n,empirical,std_error,predicted,ratio,ratio_std_error\n";
      for (const auto& r : rows)
        csv << r.n << ',' << r.empirical << ',' << r.std_error << ',' << r.predicted << ',' << r.ratio << ','
            << r.ratio_std_error << '\n';
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream(path) << csv.str();
      auto params = params_of(tail);
      params["scheme_config"] = s.echo;
      write_manifest(path, "tail-check", params, tc.seed, clock);
      std::cout << csv.str();
    };
  });

  // lln ------------------------------------------------------------------------------
  auto* lln = app.add_subcommand("lln", "Empirical P(|S_n - n mu_n| > zeta n)");
  struct {
    std::string scheme, out;
    double zeta = 0;
    std::vector<long> ns;
    long long samples = 100'000;
    std::uint64_t seed = 1;
  } ll;
  lln->add_option("--scheme", ll.scheme)->required()->check(CLI::ExistingFile);
  lln->add_option("--zeta", ll.zeta)->required();
  lln->add_option("--n", ll.ns)->required()->delimiter(',');
  lln->add_option("--samples", ll.samples);
  lln->add_option("--seed", ll.seed);
  lln->add_option("--out", ll.out)->required();
  lln->callback([&] {
    action = [&] {
      auto s = load_scheme(ll.scheme);
      std::ostringstream csv;
      csv.precision(17);
      csv << "n,prob,std_error,samples\n";
      for (long n : parse_ns(ll.ns)) {
        const auto r = lln_deviation(s.spec, n, ll.zeta, ll.samples, stream_key(ll.seed, static_cast<std::uint64_t>(n)),
                                     common.workers);
        csv << n << ',' << r.prob << ',' << r.std_error << ',' << r.samples << '\n';
        std::cerr << "lln n=" << n << " prob=" << r.prob << '\n';
      }
      const auto path = resolve(common, ll.out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream(path) << csv.str();
      auto params = params_of(lln);
      params["scheme_config"] = s.echo;
      write_manifest(path, "lln", params, ll.seed, clock);
      std::cout << csv.str();
    };
  });

  // estimate ---------------------------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "Estimate P(S_n in I_n)");
  struct {
    std::string scheme, method = "naive", out;
    long n = 0;
    double rho = 0, width = 0, eps = 0, slack = std::numeric_limits<double>::infinity();
    long long samples = 1'000'000;
    std::uint64_t seed = 1;
  } es;
  est->add_option("--scheme", es.scheme)->required()->check(CLI::ExistingFile);
  est->add_option("--n", es.n)->required();
  est->add_option("--rho", es.rho)->required();
  est->add_option("--width", es.width)->required();
  est->add_option("--method", es.method)->check(CLI::IsMember({"naive", "structured", "exact", "tk"}));
  auto* es_eps = est->add_option("--eps", es.eps, "Big-jump threshold fraction (structured)");
  est->add_option("--slack", es.slack);
  est->add_option("--samples", es.samples);
  est->add_option("--seed", es.seed);
  est->add_option("--out", es.out);
  est->callback([&] {
    if (es.method == "structured" && es_eps->count() == 0) throw CLI::RequiredError("--eps (structured method)");
    action = [&] {
      auto s = load_scheme(es.scheme);
      const RhoWindow window(es.rho, WidthRule::fixed(es.width), s.spec.alpha);
      const double mu = mean_mu_n(s.spec, es.n, 1'000'000, es.seed).value;
      const RunOptions run{es.seed, common.workers};
      json j;
      if (es.method == "exact") {
        const auto interval = interval_for(window, es.n, mu);
        j = {{"prob", exact_dp(s.spec, es.n, interval)}, {"std_error", 0.0}, {"method", "exact_dp"}};
      } else if (es.method == "tk") {
        const auto [r1, r2] = window.bounds(es.n);
        j = to_json(tk_window_prob(s.spec, window.k(), es.n, r1, r2, es.samples, run));
      } else if (es.method == "structured") {
        StructuredOptions so;
        so.slack = es.slack;
        j = to_json(estimate_structured(s.spec, es.n, window, mu, es.eps, es.samples, run, so));
      } else {
        j = to_json(estimate_naive(s.spec, es.n, window, mu, es.samples, run));
      }
      j["mu_n"] = mu;
      if (!s.spec.is_discrete() || !std::isnan(s.spec.alpha)) {
        try {
          const auto K = krho_eval(s.spec.shape_density(), es.rho, window.k(), 1e-8);
          if (es.method != "tk") {
            j["rhs"] = theorem1_rhs(s.spec, es.n, window, K);
          } else {
            j["rhs"] = window.width(es.n) * std::pow(static_cast<double>(es.n), -s.spec.alpha * window.k()) * K.value;
          }
          j["ratio"] = j["prob"].get<double>() / j["rhs"].get<double>();
        } catch (const std::exception& e) {
          j["rhs_error"] = e.what();
        }
      }
      print(j);
      if (!es.out.empty()) {
        const auto path = resolve(common, es.out);
        write_json(path, j);
        auto params = params_of(est);
        params["scheme_config"] = s.echo;
        write_manifest(path, "estimate", params, es.seed, clock);
      }
    };
  });

  // ldp-sweep --------------------------------------------------------------------------
  auto* sweep = app.add_subcommand("ldp-sweep", "Ratio of estimated P(S_n in I_n) to the asymptotic formula over n");
  struct {
    std::string scheme, out;
    double rho = 0, width = 0, w0 = 0, gamma = 0, eps = 0;
    std::vector<long> ns;
    long long samples = 1'000'000;
    bool structured = false;
    std::uint64_t seed = 1;
  } sw;
  sweep->add_option("--scheme", sw.scheme)->required()->check(CLI::ExistingFile);
  sweep->add_option("--rho", sw.rho)->required();
  auto* sw_width = sweep->add_option("--width", sw.width, "Fixed window width");
  auto* sw_w0 = sweep->add_option("--w0", sw.w0, "Power rule: width w0 n^-gamma");
  auto* sw_gamma = sweep->add_option("--gamma", sw.gamma);
  sw_width->excludes(sw_w0)->excludes(sw_gamma);
  sw_w0->needs(sw_gamma);
  sw_gamma->needs(sw_w0);
  sweep->add_option("--n", sw.ns)->required()->delimiter(',');
  sweep->add_option("--samples", sw.samples);
  sweep->add_flag("--structured", sw.structured, "Add structured-estimator rows");
  auto* sw_eps = sweep->add_option("--eps", sw.eps);
  sweep->add_option("--seed", sw.seed);
  sweep->add_option("--out", sw.out)->required();
  sweep->callback([&] {
    if (sw_width->count() == 0 && sw_w0->count() == 0) throw CLI::RequiredError("--width or --w0/--gamma");
    if (sw.structured && sw_eps->count() == 0) throw CLI::RequiredError("--eps (with --structured)");
    action = [&] {
      auto s = load_scheme(sw.scheme);
      const WidthRule rule = sw_width->count() ? WidthRule::fixed(sw.width) : WidthRule::power(sw.w0, sw.gamma);
      SweepOptions opt;
      opt.run = {sw.seed, common.workers};
      opt.structured = sw.structured;
      if (sw.structured) opt.eps = sw.eps;
      const auto rows = ratio_sweep(s.spec, sw.rho, rule, parse_ns(sw.ns), sw.samples, opt);
      for (const auto& r : rows)
        std::cerr << "n=" << r.n << " " << r.method << " prob=" << r.prob << " ratio=" << r.ratio
                  << (r.error.empty() ? "" : " error: " + r.error) << '\n';
      const auto path = resolve(common, sw.out);
      write_sweep_csv(path, rows);
      auto params = params_of(sweep);
      params["scheme_config"] = s.echo;
      write_manifest(path, "ldp-sweep", params, sw.seed, clock);
    };
  });

  // condition --------------------------------------------------------------------------
  auto* cond = app.add_subcommand("condition", "Rejection-sample rows with S_n in I_n and decompose them at eps n");
  struct {
    std::string scheme, out;
    long n = 0;
    double rho = 0, width = 0, eps = 0, gamma = 0.1;
    std::size_t hits = 300;
    long long max_samples = 100'000'000;
    std::uint64_t seed = 1;
  } co;
  cond->add_option("--scheme", co.scheme)->required()->check(CLI::ExistingFile);
  cond->add_option("--n", co.n)->required();
  cond->add_option("--rho", co.rho)->required();
  cond->add_option("--width", co.width)->required();
  cond->add_option("--eps", co.eps)->required();
  cond->add_option("--gamma", co.gamma, "Tolerance for the exactly-k-big-jumps fraction");
  cond->add_option("--hits", co.hits);
  cond->add_option("--max-samples", co.max_samples);
  cond->add_option("--seed", co.seed);
  cond->add_option("--out", co.out, "Profiles as JSON lines")->required();
  cond->callback([&] {
    action = [&] {
      auto s = load_scheme(co.scheme);
      const RhoWindow window(co.rho, WidthRule::fixed(co.width), s.spec.alpha);
      const double mu = mean_mu_n(s.spec, co.n, 1'000'000, co.seed).value;
      const auto run = conditional_profiles(s.spec, co.n, window, mu, co.eps, co.hits, co.max_samples,
                                            {co.seed, common.workers});
      const auto path = resolve(common, co.out);
      write_profiles_jsonl(path, run.profiles);
      json summary{{"hits", run.profiles.size()},
                   {"samples", run.samples},
                   {"exhausted", run.exhausted},
                   {"mu_n", mu},
                   {"corollary1_fraction", corollary1_fraction(run.profiles, window.k(), co.gamma, mu, co.rho)}};
      for (int c = 1; c <= window.k() + 1; ++c)
        summary["fraction_at_least_" + std::to_string(c) + "_big"] = big_jump_fraction(run.profiles, c);
      print(summary);
      auto params = params_of(cond);
      params["scheme_config"] = s.echo;
      write_manifest(path, "condition", params, co.seed, clock);
    };
  });

  // gof ------------------------------------------------------------------------------------
  auto* gof = app.add_subcommand("gof", "Chi-square test of conditioned jump sizes against the limit density");
  struct {
    std::string scheme, profiles, out;
    double rho = 0;
    int k = 0, bins = 8;
    std::uint64_t seed = 1;
  } gf;
  gof->add_option("--scheme", gf.scheme)->required()->check(CLI::ExistingFile);
  gof->add_option("--profiles", gf.profiles)->required()->check(CLI::ExistingFile);
  gof->add_option("--rho", gf.rho)->required();
  gof->add_option("--k", gf.k)->required();
  gof->add_option("--bins", gf.bins);
  gof->add_option("--seed", gf.seed);
  gof->add_option("--out", gf.out);
  gof->callback([&] {
    action = [&] {
      auto s = load_scheme(gf.scheme);
      const auto h = s.spec.shape_density();
      const auto K = krho_eval(h, gf.rho, gf.k, 1e-9);
      if (K.diverged) throw std::domain_error("K_rho diverged: " + K.note);
      const auto profiles = read_profiles_jsonl(gf.profiles);
      auto j = to_json(corollary2_gof(profiles, h, gf.rho, gf.k, K.value, gf.bins, gf.seed));
      j["krho"] = K.value;
      print(j);
      if (!gf.out.empty()) {
        const auto path = resolve(common, gf.out);
        write_json(path, j);
        auto params = params_of(gof);
        params["scheme_config"] = s.echo;
        write_manifest(path, "gof", params, gf.seed, clock);
      }
    };
  });

  // graph ------------------------------------------------------------------------------------
  auto* graph = app.add_subcommand("graph", "Lattice-torus random graph");
  graph->require_subcommand(1);
  auto* gen = graph->add_subcommand("gen", "Sample radii and compute all degrees");
  struct {
    int d = 0;
    long N = 0;
    double beta = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> plant;
    long long max_visits = 100'000'000;
    std::string out = "graph.json";
  } gg;
  gen->add_option("--d", gg.d)->required();
  gen->add_option("--N", gg.N)->required();
  gen->add_option("--beta", gg.beta)->required();
  gen->add_option("--seed", gg.seed)->required();
  gen->add_option("--plant", gg.plant, "Override a radius: vertex:R");
  gen->add_option("--max-visits", gg.max_visits);
  gen->add_option("--out", gg.out);
  gen->callback([&] {
    action = [&] {
      TorusConfig cfg{gg.d, gg.N, gg.beta, gg.seed};
      GraphOptions opt;
      opt.max_ball_visits = gg.max_visits;
      opt.workers = common.workers;
      for (const auto& p : gg.plant) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--plant expects vertex:R");
        opt.planted.emplace_back(std::stol(p.substr(0, colon)), std::stod(p.substr(colon + 1)));
      }
      const auto summary = generate_graph(cfg, opt);
      const auto path = resolve(common, gg.out);
      json j{{"config", {{"d", cfg.d}, {"N", cfg.N}, {"beta", cfg.beta}, {"seed", cfg.seed}, {"n", cfg.n()}}},
             {"planted", gg.plant},
             {"summary", to_json(summary, true)}};
      write_json(path, j);
      write_manifest(path, "graph gen", params_of(gen), gg.seed, clock);
      print(to_json(summary, false));
    };
  });
  auto* deg = graph->add_subcommand("degrees", "Write per-vertex degrees as CSV");
  std::string deg_graph = "graph.json", deg_out;
  deg->add_option("--graph", deg_graph);
  deg->add_option("--out", deg_out)->required();
  deg->callback([&] {
    action = [&] {
      const auto g = read_json(resolve(common, deg_graph));
      const auto summary = degrees_from_json(g);
      const auto path = resolve(common, deg_out);
      write_degrees_csv(path, summary);
      auto params = params_of(deg);
      params["graph_config"] = g.at("config");
      write_manifest(path, "graph degrees", params, g.at("config").at("seed").get<std::uint64_t>(), clock);
    };
  });
  auto* cnd = graph->add_subcommand("condense", "Condensation statistics");
  struct {
    std::string graph = "graph.json", out;
    long k = 0;
    double eps = 0;
  } gc;
  cnd->add_option("--graph", gc.graph);
  cnd->add_option("--k", gc.k)->required();
  cnd->add_option("--eps", gc.eps)->required();
  cnd->add_option("--out", gc.out);
  cnd->callback([&] {
    action = [&] {
      const auto g = read_json(resolve(common, gc.graph));
      const auto stats = condensation_stats(degrees_from_json(g), gc.k, gc.eps);
      const auto j = to_json(stats);
      print(j);
      if (!gc.out.empty()) {
        const auto path = resolve(common, gc.out);
        write_json(path, j);
        auto params = params_of(cnd);
        params["graph_config"] = g.at("config");
        write_manifest(path, "graph condense", params, g.at("config").at("seed").get<std::uint64_t>(), clock);
      }
    };
  });

  // calibrate-h -----------------------------------------------------------------------------
  auto* cal = app.add_subcommand("calibrate-h", "Measure the lattice tail constant against the closed forms");
  struct {
    int d = 0;
    double beta = 0;
    std::vector<double> a;
    std::vector<long> Ns;
    long long samples = 1'000'000;
    std::uint64_t seed = 1;
    std::string out, cache;
  } cb;
  cal->add_option("--d", cb.d)->required();
  cal->add_option("--beta", cb.beta)->required();
  cal->add_option("--a", cb.a)->required()->delimiter(',');
  cal->add_option("--N", cb.Ns)->required()->delimiter(',');
  cal->add_option("--samples", cb.samples);
  cal->add_option("--seed", cb.seed);
  cal->add_option("--geometry-cache", cb.cache, "Directory for the GeometryTable CSV cache (d >= 3)");
  cal->add_option("--out", cb.out)->required();
  cal->callback([&] {
    action = [&] {
      if (!cb.cache.empty() && cb.d >= 3) cached_geometry_table(cb.cache, cb.d);
      json rows = json::array();
      for (long N : cb.Ns) {
        TorusConfig cfg{cb.d, N, cb.beta, cb.seed};
        cfg.validate();
        const double n = static_cast<double>(cfg.n());
        std::vector<long> draws(static_cast<std::size_t>(cb.samples));
        run_chunked<int>(draws.size(), 1 << 14, common.workers, [&](std::size_t chunk, std::size_t b, std::size_t e) {
          Stream rng(stream_key(cb.seed, static_cast<std::uint64_t>(N)), chunk);
          for (std::size_t i = b; i < e; ++i) draws[i] = out_degree_sample(cfg, rng);
          return 0;
        });
        for (double a : cb.a) {
          const auto hits = std::count_if(draws.begin(), draws.end(), [&](long w) { return static_cast<double>(w) >= a * n; });
          const double p = static_cast<double>(hits) / static_cast<double>(cb.samples);
          const double se = std::sqrt(p * (1 - p) / static_cast<double>(cb.samples));
          const double scale = std::pow(n, cb.beta / cb.d);
          const double shape = std::pow(g_inverse(cb.d, a), -cb.beta);
          rows.push_back({{"N", N}, {"n", cfg.n()}, {"a", a}, {"scaled_tail", scale * p}, {"std_error", scale * se},
                          {"measured_constant", scale * p / shape}, {"measured_constant_std_error", scale * se / shape},
                          {"predicted", lattice_tail_constant(cb.d, cb.beta) * shape}});
        }
      }
      json report{{"d", cb.d},
                  {"beta", cb.beta},
                  {"analytic_constant", lattice_tail_constant(cb.d, cb.beta)},
                  {"alternative_constant", lattice_tail_constant_alternative(cb.d, cb.beta)},
                  {"alternative_form", "(4d)^(-beta/2)"},
                  {"analytic_form", "(4/d)^(beta/2)"},
                  {"rows", rows}};
      const auto path = resolve(common, cb.out);
      write_json(path, report);
      write_manifest(path, "calibrate-h", params_of(cal), cb.seed, clock);
      print(report);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!action) return 2;
  try {
    action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
