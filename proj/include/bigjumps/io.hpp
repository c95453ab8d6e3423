#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "bigjumps/rare_event.hpp"
#include "bigjumps/scheme.hpp"
#include "bigjumps/torus.hpp"

namespace bigjumps {

inline constexpr const char* kVersion = "0.3.0";

/// key = value lines; '#' starts a comment. Keys are case-sensitive.
struct Config {
  std::map<std::string, std::string> values;
  std::string source;

  static Config parse(const std::string& text, const std::string& source = "<string>");
  static Config load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  double number(const std::string& key) const;
  bool has(const std::string& key) const { return values.count(key) > 0; }
};

/// Keys: shape (truncated_pareto | smooth_cutoff | lattice_ball | discrete_grid),
/// alpha, c, d, beta, pmf (comma or space separated), mu, grid_step.
SchemeSpec scheme_from_config(const Config& config);

nlohmann::json to_json(const SchemeSpec& spec);
nlohmann::json to_json(const EstimateResult& r);
nlohmann::json to_json(const KrhoResult& r);
nlohmann::json to_json(const JumpProfile& p);
nlohmann::json to_json(const GofResult& g);
nlohmann::json to_json(const DegreeSummary& s, bool include_degrees);
nlohmann::json to_json(const CondensationStats& s);

/// Batch values as CSV (replica, value) plus a JSON header file (spec, n, seed).
void write_batch(const std::filesystem::path& csv, const SchemeSpec& spec, const SampleBatch& batch);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
void write_profiles_jsonl(const std::filesystem::path& path, const std::vector<JumpProfile>& profiles);
std::vector<JumpProfile> read_profiles_jsonl(const std::filesystem::path& path);

void write_degrees_csv(const std::filesystem::path& path, const DegreeSummary& summary);
DegreeSummary degrees_from_json(const nlohmann::json& graph);

/// GeometryTable cache file for (d, grid size): columns r, g.
std::filesystem::path geometry_cache_path(const std::filesystem::path& dir, int d, std::size_t points);
void save_geometry_table(const std::filesystem::path& path, const GeometryTable& table);
GeometryTable load_geometry_table(const std::filesystem::path& path);
/// Loads the cached table if present, else builds and writes it; installs it either way.
const GeometryTable& cached_geometry_table(const std::filesystem::path& dir, int d, std::size_t points = 4096);

nlohmann::json make_manifest(const std::string& subcommand, const nlohmann::json& params, std::uint64_t seed,
                             double seconds);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace bigjumps
