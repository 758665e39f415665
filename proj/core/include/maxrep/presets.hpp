#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maxrep {

struct Preset {
  std::string name;
  std::string description;
  std::string config_text;
};

/// Bundled experiment configs, one per application plus the model contrast.
const std::vector<Preset>& presets();

std::optional<Preset> find_preset(std::string_view name);

} // namespace maxrep
