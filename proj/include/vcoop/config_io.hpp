#pragma once

#include <string>

#include "vcoop/channel.hpp"
#include "vcoop/model.hpp"

namespace vcoop {

/// Parses a scenario JSON document (config units). Unknown keys, missing
/// keys and non-numeric values are all reported in one ValidationError.
Scenario parse_scenario_json(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string scenario_to_json(const Scenario& s);

/// Parses a model JSON document:
///   {"mobility": "constant" | {"type": "gaussian", "sigma1", "sigma2", "tau"},
///    "connection": "unit_disk" | {"type": "log_normal", "alpha", "sigma", "tau"},
///    "channel": "constant_rate" | {"type": "rayleigh_path_loss", "B_I_hz",
///               "P_I_dbm", "B_V_hz", "P_V_dbm", "segments"}}
/// Every key is optional; omitted parts keep their defaults.
ModelConfig parse_models_json(const std::string& text);
ModelConfig load_models_file(const std::string& path);
std::string models_to_json(const ModelConfig& m);

std::string read_text_file(const std::string& path);

}  // namespace vcoop
