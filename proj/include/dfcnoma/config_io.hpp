#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "dfcnoma/system_model.hpp"

namespace dfcnoma {

double db_to_linear(double db);
double linear_to_db(double linear);

/// Builds a SystemConfig from a flat JSON object, starting from the
/// defaults. SNRs are read from `rho_b_db` / `rho_u_db`; every other key
/// uses the SystemConfig field name. Keys listed in `passthrough` are
/// skipped; any other unknown key, or a non-numeric value, is a ConfigError
/// naming that key. The result is validated.
SystemConfig parse_system_config(const nlohmann::json& doc, const std::set<std::string>& passthrough = {});

nlohmann::json system_config_to_json(const SystemConfig& cfg);

}  // namespace dfcnoma
