#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "bigjumps/io.hpp"

using namespace bigjumps;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("bigjumps_test_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string("cd '") + dir.string() + "' && '" + BIGJUMPS_CLI + "' " + args + " > '" +
                          log.string() + "' 2> '" + (dir / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(log);
  return r;
}

std::size_t file_count(const fs::path& dir) {
  std::size_t c = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() != "stdout.txt" && e.path().filename() != "stderr.txt") ++c;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = Config::parse("# scheme\nshape = truncated_pareto\n  c=1.5  # trailing\nalpha = 1.5\n\n");
  CHECK(c.values.size() == 3);
  CHECK(*c.get("shape") == "truncated_pareto");
  CHECK(c.number("c") == 1.5);
  CHECK_FALSE(c.get("beta"));
  CHECK_THROWS_AS(c.number("beta"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse("shape truncated_pareto"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse("= 3"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse("c = 1.5x").number("c"), std::invalid_argument);
}

TEST_CASE("scheme from config") {
  auto s = scheme_from_config(Config::parse("shape = truncated_pareto\nc = 1.5\nalpha = 1.5"));
  CHECK(s.kind() == "truncated_pareto");
  CHECK(s.alpha == 1.5);
  s = scheme_from_config(Config::parse("shape = lattice_ball\nd = 2\nbeta = 3"));
  CHECK(s.alpha == doctest::Approx(1.5));
  CHECK_THROWS(scheme_from_config(Config::parse("shape = lattice_ball\nd = 2\nbeta = 3\nalpha = 2")));
  s = scheme_from_config(Config::parse("shape = discrete_grid\npmf = 0.5, 0.3, 0.2\ngrid_step = n/m\nmu = 0.1"));
  CHECK(s.is_discrete());
  CHECK(s.mu_limit.value() == 0.1);
  CHECK_THROWS(scheme_from_config(Config::parse("shape = discrete_grid\npmf = 0.5, 0.3, 0.2\ngrid_step = 1")));
  CHECK_THROWS(scheme_from_config(Config::parse("shape = discrete_grid\npmf = 0.5, 0.3")));
  CHECK_THROWS(scheme_from_config(Config::parse("shape = truncated_pareto\nc = 1.5\nalpha = 1.5\ncolour = red")));
  CHECK_THROWS(scheme_from_config(Config::parse("shape = cauchy")));
  CHECK_THROWS(scheme_from_config(Config::parse("c = 1")));
  CHECK_THROWS(scheme_from_config(Config::parse("shape = truncated_pareto\nc = -1\nalpha = 1.5")));
}

TEST_CASE("json round trips") {
  KrhoResult r;
  r.value = std::numeric_limits<double>::infinity();
  r.diverged = true;
  CHECK(to_json(r)["value"] == "inf");
  TempDir tmp;
  std::vector<JumpProfile> ps(2);
  ps[0].n = 10;
  ps[0].big_jumps = {{3, 7.5}, {1, 6.25}};
  ps[0].bulk_sum = 1.0 / 3.0;
  ps[0].s_n = 7.5 + 6.25 + 1.0 / 3.0;
  ps[1].n = 10;
  write_profiles_jsonl(tmp.path / "p.jsonl", ps);
  const auto back = read_profiles_jsonl(tmp.path / "p.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0].big_jumps == ps[0].big_jumps);
  CHECK(back[0].bulk_sum == ps[0].bulk_sum);
  CHECK(back[1].big_jumps.empty());
}

TEST_CASE("CLI: krho on the uniform density") {
  TempDir tmp;
  const auto r = cli("krho --h uniform --rho 1.5 --k 2 --tol 1e-9 --out k.json", tmp.path);
  REQUIRE(r.code == 0);
  const auto j = read_json(tmp.path / "k.json");
  CHECK(j["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  const auto m = read_json(tmp.path / "k.json.manifest.json");
  CHECK(m["subcommand"] == "krho");
  CHECK(m["parameters"]["rho"] == "1.5");
  CHECK(m["version"] == kVersion);
}

TEST_CASE("CLI: argument and domain errors") {
  TempDir tmp;
  CHECK(cli("krho --h uniform --rho 1.5 --k 2", tmp.path).code == 2);
  CHECK(cli("no-such-command", tmp.path).code == 2);
  CHECK(cli("", tmp.path).code == 2);
  CHECK(cli("estimate --scheme missing.cfg --n 10 --rho 1.5 --width 0.1", tmp.path).code == 2);
  CHECK(file_count(tmp.path) == 0);
  CHECK(cli("krho --h uniform --rho 2.5 --k 2 --tol 1e-6 --out k.json", tmp.path).code == 1);
  CHECK_FALSE(fs::exists(tmp.path / "k.json"));
  spit(tmp.path / "tp.cfg", "shape = truncated_pareto\nc = 1.5\nalpha = 1.5\n");
  CHECK(cli("estimate --scheme tp.cfg --n 100 --rho 1.5 --width 0.1 --method structured", tmp.path).code == 2);
  CHECK(cli("--help", tmp.path).code == 0);
}

TEST_CASE("CLI: graph generation, degrees and condensation") {
  TempDir tmp;
  REQUIRE(cli("graph gen --d 2 --N 6 --beta 3 --seed 4 --plant 0:4.5 --out g.json", tmp.path).code == 0);
  REQUIRE(cli("graph degrees --graph g.json --out deg.csv", tmp.path).code == 0);
  std::ifstream in(tmp.path / "deg.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "vertex_index,out_degree,in_degree");
  long long out_sum = 0, in_sum = 0, rows = 0;
  while (std::getline(in, line)) {
    long v = 0, o = 0, i = 0;
    REQUIRE(std::sscanf(line.c_str(), "%ld,%ld,%ld", &v, &o, &i) == 3);
    CHECK(v == rows);
    out_sum += o;
    in_sum += i;
    ++rows;
  }
  CHECK(rows == 13 * 13);
  CHECK(out_sum == in_sum);
  const auto g = read_json(tmp.path / "g.json");
  CHECK(out_sum == g["summary"]["edge_count"].get<long long>());
  // Radius 4.5 from vertex 0 covers every lattice point within distance < 4.5.
  CHECK(g["summary"]["out_degrees"][0].get<long>() == ball_point_count(2, 6, 4.5));
  REQUIRE(cli("graph condense --graph g.json --k 1 --eps 0.1 --out c.json", tmp.path).code == 0);
  const auto c = read_json(tmp.path / "c.json");
  CHECK(c["top_k_out_share"].get<double>() > 0);
  CHECK(fs::exists(tmp.path / "c.json.manifest.json"));
}

TEST_CASE("CLI: reruns with the same seed write identical outputs") {
  TempDir tmp;
  spit(tmp.path / "tp.cfg", "shape = truncated_pareto\nc = 1.5\nalpha = 1.5\n");
  const std::string args = "ldp-sweep --scheme tp.cfg --rho 1.5 --width 0.2 --n 32,64 --samples 20000 --seed 3 --out ";
  REQUIRE(cli(args + "a.csv", tmp.path).code == 0);
  REQUIRE(cli("--workers 3 " + args + "b.csv", tmp.path).code == 0);
  CHECK(slurp(tmp.path / "a.csv") == slurp(tmp.path / "b.csv"));
  CHECK(slurp(tmp.path / "a.csv").rfind("n,method,prob,std_error,rhs,ratio\n", 0) == 0);
  REQUIRE(cli("condition --scheme tp.cfg --n 64 --rho 1.5 --width 0.4 --eps 0.2 --hits 50 --seed 2 --out p.jsonl",
              tmp.path).code == 0);
  REQUIRE(cli("condition --scheme tp.cfg --n 64 --rho 1.5 --width 0.4 --eps 0.2 --hits 50 --seed 2 --out q.jsonl",
              tmp.path).code == 0);
  CHECK(slurp(tmp.path / "p.jsonl") == slurp(tmp.path / "q.jsonl"));
  CHECK(read_profiles_jsonl(tmp.path / "p.jsonl").size() == 50);
}

TEST_CASE("CLI: output directory from the environment") {
  TempDir tmp;
  fs::create_directories(tmp.path / "out");
  const std::string env = "BIGJUMPS_OUT_DIR='" + (tmp.path / "out").string() + "' ";
  const std::string cmd = "cd '" + tmp.path.string() + "' && " + env + "'" + BIGJUMPS_CLI +
                          "' krho --h uniform --rho 0.5 --k 1 --tol 1e-6 --out k.json > /dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(tmp.path / "out" / "k.json"));
}
