#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "windfarm/params.hpp"
#include "windfarm/scenario.hpp"

namespace windfarm {

struct RunConfig {
  TurbineParams params = default_params();
  ScenarioConfig scenario = reference_scenario();

  bool operator==(const RunConfig&) const = default;
};

/// Parses {"params": {...}, "scenario": {...}} merged over the defaults.
/// Unknown keys, wrong types and invariant violations throw ConfigError with
/// the field name and, where it can be located, the 1-based line. Blank text
/// yields the defaults. T_m_base and K_opt are recomputed from the merged
/// values unless set explicitly.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Complete JSON document; parse_config(serialize_config(c)) == c bit for bit.
std::string serialize_config(const RunConfig& config);

std::string_view to_string(WindSpec::Kind kind);
std::string_view to_string(Method method);

}  // namespace windfarm
