#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scanpath/core.hpp"
#include "scanpath/eva/config.hpp"
#include "scanpath/gcs.hpp"
#include "scanpath/metrics.hpp"

namespace scanpath {

// Resolved run configuration. Precedence, lowest to highest: built-in
// defaults, the SCANPATH_SEED environment variable (seed only), a config
// file, command-line flags.
struct ToolConfig {
  ReferenceFrame frame{224, 224};
  metrics::MetricConfig metric;
  gcs::GcsConfig gcs;
  eva::GlimpseConfig glimpse;
  eva::EvaDims dims;
  eva::EvaConfig eva;
  std::uint64_t seed = 1;
  int jobs = 1;

  // Reads SCANPATH_SEED if set; called once before file/flag overrides.
  void apply_env();

  // Parses a config file of "[section]" headers and "key = value" lines
  // (comments start with '#' or ';'). Unknown keys are an error.
  void load_file(const std::string& path);

  void apply(const std::string& section, const std::string& key, const std::string& value);

  // Copies the shared sub-configs (metric seed, gcs.metric) so every module
  // sees one consistent view. Call after all overrides.
  void finalize();

  // Every resolved key in canonical order, for embedding in outputs.
  std::vector<std::pair<std::string, std::string>> resolved() const;

  // resolved() rendered as "# key=value" comment lines, prefixed with the
  // tool version line.
  std::string echo_comments() const;

  // resolved() rendered as a JSON object string.
  std::string echo_json() const;
};

}  // namespace scanpath
