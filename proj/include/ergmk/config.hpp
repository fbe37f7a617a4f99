#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ergmk/cfp.hpp"
#include "ergmk/process.hpp"
#include "ergmk/sim.hpp"

namespace ergmk {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigVersion = "1";

struct SamplerSettings {
  std::uint64_t burn_in = 10000;
  std::uint64_t thin = 10;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  int batches = 20;
  double threshold = 4.0;
};

struct CfpSettings {
  CfpParams params;
  /// Set when M came from the scaling rule round(c n^(1-gamma)).
  std::optional<double> c;
  std::optional<double> gamma;
};

/// A parsed run configuration.
///
/// `resolved` is the manifest: the same document with every default filled
/// in and every path made absolute, so that loading it again reproduces the
/// run.
struct RunConfig {
  Json resolved;
  int n = 0;
  bool directed = false;
  std::optional<ProcessSpec> process;
  SimConfig sim;
  bool has_max_events = false;
  std::optional<SamplerSettings> sampler;
  std::optional<CfpSettings> cfp;
  std::filesystem::path output_dir;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
};

/// Throws ConfigError on unknown keys, bad values or a missing "version".
RunConfig parse_config(const Json& doc, const std::filesystem::path& base_dir, const ConfigOverrides& over = {});
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& over = {});

/// "edges", "mutuals", "triangles", "twostars", "edgecov:<file>" (n x n
/// whitespace-separated matrix, path relative to base_dir).
StatisticTerm parse_term(const std::string& key, int n, const std::filesystem::path& base_dir);
/// "counting", "krivitsky", "reciprocity", "powerlaw:<gamma>".
ReferenceMeasure parse_reference(const std::string& key);

}  // namespace ergmk
