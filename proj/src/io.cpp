#include "bigjumps/io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace bigjumps {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "")
    throw std::invalid_argument("config: '" + key + "' is not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::string cleaned = text;
  for (char& ch : cleaned)
    if (ch == ',' || ch == '[' || ch == ']' || ch == ';') ch = ' ';
  std::istringstream in(cleaned);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number("pmf", tok));
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

// --- config ----------------------------------------------------------------------

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source = source;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": empty key");
    c.values[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

double Config::number(const std::string& key) const {
  const auto v = get(key);
  if (!v) throw std::invalid_argument("config " + source + " is missing '" + key + "'");
  return parse_number(key, *v);
}

SchemeSpec scheme_from_config(const Config& config) {
  static const std::vector<std::string> known{"shape", "alpha", "beta", "c", "d", "grid_step", "pmf", "mu"};
  for (const auto& [key, value] : config.values)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("config " + config.source + ": unknown key '" + key + "'");
  const auto shape = config.get("shape");
  if (!shape) throw std::invalid_argument("config " + config.source + " is missing 'shape'");
  SchemeSpec spec;
  if (*shape == "truncated_pareto") {
    spec = SchemeSpec::truncated_pareto(config.number("c"), config.number("alpha"));
  } else if (*shape == "smooth_cutoff") {
    spec = SchemeSpec::smooth_cutoff(config.number("c"), config.number("alpha"));
  } else if (*shape == "lattice_ball") {
    const double d = config.number("d");
    if (d != std::floor(d)) throw std::invalid_argument("config: d must be an integer");
    spec = SchemeSpec::lattice_ball(static_cast<int>(d), config.number("beta"));
    if (config.has("alpha") && std::abs(config.number("alpha") - spec.alpha) > 1e-12)
      throw std::invalid_argument("config: alpha must equal beta/d for lattice_ball");
  } else if (*shape == "discrete_grid") {
    const auto pmf = config.get("pmf");
    if (!pmf) throw std::invalid_argument("config " + config.source + " is missing 'pmf'");
    auto values = parse_list(*pmf);
    if (config.has("grid_step") && trim(*config.get("grid_step")) != "n/m")
      throw std::invalid_argument("config: grid_step is fixed to n/m for discrete_grid");
    spec = SchemeSpec::discrete_grid(std::move(values), config.has("alpha") ? config.number("alpha")
                                                                            : std::numeric_limits<double>::quiet_NaN());
  } else {
    throw std::invalid_argument("config: unknown shape '" + *shape + "'");
  }
  if (config.has("mu")) spec.mu_limit = config.number("mu");
  spec.validate();
  return spec;
}

// --- JSON --------------------------------------------------------------------------

json to_json(const SchemeSpec& spec) {
  json j;
  j["shape"] = spec.kind();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TruncatedPareto> || std::is_same_v<T, SmoothCutoff>) {
          j["c"] = s.c;
        } else if constexpr (std::is_same_v<T, LatticeBall>) {
          j["d"] = s.d;
          j["beta"] = s.beta;
        } else {
          j["pmf"] = s.pmf;
          j["grid_step"] = "n/m";
        }
      },
      spec.shape);
  if (std::isnan(spec.alpha))
    j["alpha"] = nullptr;
  else
    j["alpha"] = spec.alpha;
  if (spec.mu_limit) j["mu"] = *spec.mu_limit;
  return j;
}

json to_json(const EstimateResult& r) {
  json j{{"prob", r.prob}, {"std_error", r.std_error}, {"samples", r.samples}, {"hits", r.hits}, {"method", r.method}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

json to_json(const KrhoResult& r) {
  json j{{"value", std::isfinite(r.value) ? json(r.value) : json("inf")},
         {"abs_error_bound", std::isfinite(r.abs_error_bound) ? json(r.abs_error_bound) : json("inf")},
         {"method", to_string(r.method)},
         {"diverged", r.diverged}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const JumpProfile& p) {
  json big = json::array();
  for (const auto& [i, v] : p.big_jumps) big.push_back({i, v});
  return {{"n", p.n}, {"big_jumps", big}, {"bulk_sum", p.bulk_sum}, {"s_n", p.s_n}};
}

json to_json(const GofResult& g) {
  json j{{"chi2", g.chi2},          {"dof", g.dof},         {"p_value", g.p_value},   {"bins_used", g.bins_used},
         {"used", g.used},          {"skipped", g.skipped}, {"clamped", g.clamped},   {"observed", g.observed},
         {"expected", g.expected}};
  if (!g.note.empty()) j["note"] = g.note;
  return j;
}

json to_json(const DegreeSummary& s, bool include_degrees) {
  json j{{"n", s.out_degrees.size()}, {"edge_count", s.edge_count}, {"rho_n", s.rho_n}};
  if (!s.out_degrees.empty()) {
    j["max_out_degree"] = *std::max_element(s.out_degrees.begin(), s.out_degrees.end());
    j["max_in_degree"] = *std::max_element(s.in_degrees.begin(), s.in_degrees.end());
  }
  if (include_degrees) {
    j["out_degrees"] = s.out_degrees;
    j["in_degrees"] = s.in_degrees;
  }
  return j;
}

json to_json(const CondensationStats& s) {
  return {{"top_k_out_share", s.top_k_out_share}, {"big_out_count", s.big_out_count}, {"max_in_share", s.max_in_share}};
}

// --- files ---------------------------------------------------------------------------

void write_batch(const fs::path& csv, const SchemeSpec& spec, const SampleBatch& batch) {
  auto out = open_out(csv);
  out << "replica,value\n";
  for (std::size_t r = 0; r < batch.sums.size(); ++r) out << r << ',' << batch.sums[r] << '\n';
  fs::path header = csv;
  header.replace_extension(".json");
  write_json(header, json{{"spec", to_json(spec)}, {"n", batch.n}, {"seed", batch.seed}, {"replicas", batch.sums.size()}});
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "n,method,prob,std_error,rhs,ratio\n";
  for (const auto& r : rows) out << r.n << ',' << r.method << ',' << r.prob << ',' << r.std_error << ',' << r.rhs << ',' << r.ratio << '\n';
}

void write_profiles_jsonl(const fs::path& path, const std::vector<JumpProfile>& profiles) {
  auto out = open_out(path);
  for (const auto& p : profiles) out << to_json(p).dump() << '\n';
}

std::vector<JumpProfile> read_profiles_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read profiles " + path.string());
  std::vector<JumpProfile> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto j = json::parse(line);
    JumpProfile p;
    p.n = j.at("n").get<long>();
    p.bulk_sum = j.at("bulk_sum").get<double>();
    p.s_n = j.at("s_n").get<double>();
    for (const auto& b : j.at("big_jumps")) p.big_jumps.emplace_back(b.at(0).get<long>(), b.at(1).get<double>());
    out.push_back(std::move(p));
  }
  return out;
}

void write_degrees_csv(const fs::path& path, const DegreeSummary& summary) {
  auto out = open_out(path);
  out << "vertex_index,out_degree,in_degree\n";
  for (std::size_t v = 0; v < summary.out_degrees.size(); ++v)
    out << v << ',' << summary.out_degrees[v] << ',' << summary.in_degrees[v] << '\n';
}

DegreeSummary degrees_from_json(const json& graph) {
  DegreeSummary s;
  const auto& summary = graph.at("summary");
  s.out_degrees = summary.at("out_degrees").get<std::vector<long>>();
  s.in_degrees = summary.at("in_degrees").get<std::vector<long>>();
  s.edge_count = summary.at("edge_count").get<long long>();
  s.rho_n = summary.at("rho_n").get<double>();
  return s;
}

fs::path geometry_cache_path(const fs::path& dir, int d, std::size_t points) {
  return dir / ("geometry_d" + std::to_string(d) + "_" + std::to_string(points) + ".csv");
}

void save_geometry_table(const fs::path& path, const GeometryTable& table) {
  auto out = open_out(path);
  out << "# d=" << table.d << " points=" << table.r.size() << "\n";
  out << "r,g\n";
  for (std::size_t i = 0; i < table.r.size(); ++i) out << table.r[i] << ',' << table.g[i] << '\n';
}

GeometryTable load_geometry_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read geometry table " + path.string());
  GeometryTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (const auto p = line.find("d="); p != std::string::npos) t.d = std::stoi(line.substr(p + 2));
      continue;
    }
    if (line.rfind("r,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("malformed geometry row: " + line);
    t.r.push_back(std::stod(line.substr(0, comma)));
    t.g.push_back(std::stod(line.substr(comma + 1)));
  }
  if (t.d < 1 || t.r.size() < 2) throw std::runtime_error("geometry table " + path.string() + " is incomplete");
  for (std::size_t i = 0; i < t.r.size(); ++i)
    if (std::abs(t.r[i] - static_cast<double>(i) / static_cast<double>(t.r.size() - 1)) > 1e-12)
      throw std::runtime_error("geometry table " + path.string() + " is not on a uniform grid");
  return t;
}

const GeometryTable& cached_geometry_table(const fs::path& dir, int d, std::size_t points) {
  const auto path = geometry_cache_path(dir, d, points);
  if (fs::exists(path)) {
    auto t = load_geometry_table(path);
    if (t.d != d || t.r.size() != points) throw std::runtime_error("geometry cache key mismatch in " + path.string());
    GeometryTable::install(std::move(t));
  } else {
    auto t = GeometryTable::build(d, points);
    save_geometry_table(path, t);
    GeometryTable::install(std::move(t));
  }
  return GeometryTable::get(d);
}

json make_manifest(const std::string& subcommand, const json& params, std::uint64_t seed, double seconds) {
  return {{"subcommand", subcommand}, {"parameters", params}, {"seed", seed}, {"version", kVersion},
          {"wall_clock_seconds", seconds}};
}

void write_json(const fs::path& path, const json& value) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

}  // namespace bigjumps
