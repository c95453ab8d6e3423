#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bigjumps/io.hpp"
#include "bigjumps/krho.hpp"
#include "bigjumps/rare_event.hpp"
#include "bigjumps/scheme.hpp"
#include "bigjumps/torus.hpp"

namespace py = pybind11;
using namespace bigjumps;

namespace {

py::dict estimate_dict(const EstimateResult& r) {
  py::dict d;
  d["prob"] = r.prob;
  d["std_error"] = r.std_error;
  d["samples"] = r.samples;
  d["hits"] = r.hits;
  d["method"] = r.method;
  d["warning"] = r.warning;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cut-off heavy-tailed schemes, K_rho and rare-event estimators";
  m.attr("__version__") = kVersion;

  py::class_<SchemeSpec>(m, "SchemeSpec")
      .def_static("truncated_pareto", &SchemeSpec::truncated_pareto, py::arg("c"), py::arg("alpha"))
      .def_static("smooth_cutoff", &SchemeSpec::smooth_cutoff, py::arg("c"), py::arg("alpha"))
      .def_static("lattice_ball", &SchemeSpec::lattice_ball, py::arg("d"), py::arg("beta"))
      .def_static("discrete_grid", &SchemeSpec::discrete_grid, py::arg("pmf"),
                  py::arg("alpha") = std::numeric_limits<double>::quiet_NaN())
      .def_static("from_config", [](const std::string& path) { return scheme_from_config(Config::load(path)); })
      .def_property_readonly("kind", &SchemeSpec::kind)
      .def_readonly("alpha", &SchemeSpec::alpha)
      .def("__repr__", [](const SchemeSpec& s) { return "<SchemeSpec " + to_json(s).dump() + ">"; });

  py::class_<KrhoResult>(m, "KrhoResult")
      .def_readonly("value", &KrhoResult::value)
      .def_readonly("abs_error_bound", &KrhoResult::abs_error_bound)
      .def_readonly("diverged", &KrhoResult::diverged)
      .def_readonly("note", &KrhoResult::note)
      .def_property_readonly("method", [](const KrhoResult& r) { return to_string(r.method); });

  m.def("sample_sums",
        [](const SchemeSpec& spec, long n, std::size_t replicas, std::uint64_t seed, unsigned workers) {
          BatchOptions opt;
          opt.workers = workers;
          py::gil_scoped_release release;
          return sample_batch(spec, n, replicas, seed, opt).sums;
        },
        py::arg("spec"), py::arg("n"), py::arg("replicas"), py::arg("seed"), py::arg("workers") = 1);
  m.def("h_eval", &h_eval, py::arg("spec"), py::arg("x"));
  m.def("mean_mu_n", [](const SchemeSpec& spec, long n) { return mean_mu_n(spec, n, 1'000'000, 1).value; },
        py::arg("spec"), py::arg("n"));

  m.def("krho",
        [](double rho, int k, double tol, const std::string& h, const SchemeSpec* spec, bool with_atom) {
          ShapeDensity density = spec ? spec->shape_density() : densities::uniform();
          if (!spec && h != "uniform") throw std::invalid_argument("h must be 'uniform' when no scheme is given");
          return with_atom ? krho_eval_with_atom(density, rho, k, tol) : krho_eval(density, rho, k, tol);
        },
        py::arg("rho"), py::arg("k"), py::arg("tol") = 1e-8, py::arg("h") = "uniform", py::arg("spec") = nullptr,
        py::arg("with_atom") = false);

  m.def("estimate_naive",
        [](const SchemeSpec& spec, long n, double lo, double hi, long long samples, std::uint64_t seed) {
          EstimateResult r;
          {
            py::gil_scoped_release release;
            r = estimate_naive(spec, n, Interval{lo, hi}, samples, {seed, 1});
          }
          return estimate_dict(r);
        },
        py::arg("spec"), py::arg("n"), py::arg("lo"), py::arg("hi"), py::arg("samples"), py::arg("seed") = 1);
  m.def("exact_dp", [](const SchemeSpec& spec, long n, double lo, double hi) { return exact_dp(spec, n, {lo, hi}); },
        py::arg("spec"), py::arg("n"), py::arg("lo"), py::arg("hi"));
  m.def("theorem1_rhs", py::overload_cast<long, int, double, double, double>(&theorem1_rhs), py::arg("n"),
        py::arg("k"), py::arg("alpha"), py::arg("width"), py::arg("krho"));
  m.def("tk_window_prob",
        [](const SchemeSpec& spec, int k, long n, double s1, double s2, long long samples, std::uint64_t seed) {
          return estimate_dict(tk_window_prob(spec, k, n, s1, s2, samples, {seed, 1}));
        },
        py::arg("spec"), py::arg("k"), py::arg("n"), py::arg("sigma1"), py::arg("sigma2"), py::arg("samples"),
        py::arg("seed") = 1);
  m.def("ratio_sweep",
        [](const SchemeSpec& spec, double rho, double width, const std::vector<long>& ns, long long samples,
           std::uint64_t seed) {
          SweepOptions opt;
          opt.run.seed = seed;
          std::vector<SweepRow> rows;
          {
            py::gil_scoped_release release;
            rows = ratio_sweep(spec, rho, WidthRule::fixed(width), ns, samples, opt);
          }
          py::list out;
          for (const auto& r : rows) {
            py::dict d;
            d["n"] = r.n;
            d["method"] = r.method;
            d["prob"] = r.prob;
            d["std_error"] = r.std_error;
            d["rhs"] = r.rhs;
            d["ratio"] = r.ratio;
            d["error"] = r.error;
            out.append(d);
          }
          return out;
        },
        py::arg("spec"), py::arg("rho"), py::arg("width"), py::arg("ns"), py::arg("samples"), py::arg("seed") = 1);

  m.def("ball_point_count", &ball_point_count, py::arg("d"), py::arg("N"), py::arg("R"));
  m.def("g_eval", &g_eval, py::arg("d"), py::arg("r"));
  m.def("g_inverse", &g_inverse, py::arg("d"), py::arg("a"));
  m.def("h_lattice", &h_lattice, py::arg("d"), py::arg("beta"), py::arg("x"));
  m.def("generate_graph",
        [](int d, long N, double beta, std::uint64_t seed) {
          DegreeSummary s;
          {
            py::gil_scoped_release release;
            s = generate_graph(TorusConfig{d, N, beta, seed});
          }
          py::dict out;
          out["out_degrees"] = s.out_degrees;
          out["in_degrees"] = s.in_degrees;
          out["edge_count"] = s.edge_count;
          out["rho_n"] = s.rho_n;
          return out;
        },
        py::arg("d"), py::arg("N"), py::arg("beta"), py::arg("seed"));
}
