#pragma once

// Serialization of configs and reports: canonical config JSON, CSV and text
// renderings, and the run manifest.
//
// Every rendered file starts with `# seed=<u64> version=<v> config_hash=<h>`
// where h is FNV-1a 64 (hex) of the compact config JSON.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "siglab/experiments.hpp"

namespace siglab::report {

using json = nlohmann::json;

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double v);

json to_json(const experiments::Exp1Config& cfg);
json to_json(const experiments::Exp2Config& cfg);
json to_json(const experiments::Exp3Config& cfg);

/// Inverse of to_json. Missing keys keep their defaults; a key of the wrong
/// type throws ConfigError naming it.
experiments::Exp1Config exp1_config_from_json(const json& j);
experiments::Exp2Config exp2_config_from_json(const json& j);
experiments::Exp3Config exp3_config_from_json(const json& j);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string config_hash(const json& config);
std::string header_line(std::uint64_t seed, const json& config);

struct OutputFile {
  std::string name;
  std::string contents;
};

/// exp1_events.csv, exp1_fwer.csv, exp1_gof.csv
std::vector<OutputFile> render_exp1(const experiments::Exp1Report& report);
/// exp2_size.csv, exp2_table.txt
std::vector<OutputFile> render_exp2(const experiments::Exp2Report& report);
/// exp3_rho<r>.csv, one per correlation
std::vector<OutputFile> render_exp3(const experiments::Exp3Report& report);

/// Column name for one pretest level, e.g. 0.05 -> rej_pms_au005.
std::string pms_column(double alpha_u);

/// Writes files into `dir` (created if needed) and returns their paths.
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir,
                                                 const std::vector<OutputFile>& files);

struct RunManifest {
  std::string version;
  std::string subcommand;
  json config;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
};

json to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);
RunManifest load_manifest(const std::filesystem::path& path);

/// UTC, ISO 8601 with seconds.
std::string utc_timestamp();

}  // namespace siglab::report
