#pragma once

#include "maxrep/engine.hpp"
#include "maxrep/models.hpp"
#include "maxrep/norming.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maxrep {

enum class NormingChoice { auto_by_family, quantile, explicit_values };

struct DPrimeRequest {
  std::vector<std::size_t> ks;
  double x_level = 0.0;
  std::size_t replications = 10000;
};

// A complete batch experiment. Parsed from a flat `section.key = value` text
// format; see docs/config-format.md for the schema.
struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentSpec experiment;
  bool seed_specified = false;
  EvalGrid grid;
  NormingChoice norming_choice = NormingChoice::auto_by_family;
  double explicit_a = 1.0;
  double explicit_b = 0.0;
  std::filesystem::path output_dir = "out";
  std::optional<DPrimeRequest> dprime;
};

/// Parses and validates a config. Errors name the offending key:
/// ConfigParseError for syntax/unknown keys, InvalidParameter and friends
/// for out-of-range values.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Norming for the configured process and choice.
Norming resolve_norming(const ExperimentConfig& config);

/// Default experiment grid {-2, -1.5, ..., 3} on both axes.
EvalGrid default_grid();

} // namespace maxrep
