#include "dfcnoma/config_io.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace dfcnoma {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

using Setter = std::function<void(SystemConfig&, double)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"theta1", [](SystemConfig& c, double v) { c.theta1 = v; }},
        {"theta3", [](SystemConfig& c, double v) { c.theta3 = v; }},
        {"theta2", [](SystemConfig& c, double v) { c.theta2 = v; }},
        {"theta3p", [](SystemConfig& c, double v) { c.theta3p = v; }},
        {"rho_b_db", [](SystemConfig& c, double v) { c.rho_b = db_to_linear(v); }},
        {"rho_u_db", [](SystemConfig& c, double v) { c.rho_u = db_to_linear(v); }},
        {"lambda_b1", [](SystemConfig& c, double v) { c.lambda_b1 = v; }},
        {"lambda_b2", [](SystemConfig& c, double v) { c.lambda_b2 = v; }},
        {"lambda_21", [](SystemConfig& c, double v) { c.lambda_21 = v; }},
        {"lambda_23", [](SystemConfig& c, double v) { c.lambda_23 = v; }},
        {"lambda_2d", [](SystemConfig& c, double v) { c.lambda_2d = v; }},
        {"lambda_22", [](SystemConfig& c, double v) { c.lambda_22 = v; }},
        {"sigma1", [](SystemConfig& c, double v) { c.sigma1 = v; }},
        {"sigma2", [](SystemConfig& c, double v) { c.sigma2 = v; }},
        {"sigma3", [](SystemConfig& c, double v) { c.sigma3 = v; }},
        {"r1", [](SystemConfig& c, double v) { c.r1 = v; }},
        {"r3", [](SystemConfig& c, double v) { c.r3 = v; }},
        {"rd", [](SystemConfig& c, double v) { c.rd = v; }},
    };
    return table;
}

// Maps linear-field validation keys back to the spelling used in files.
std::string file_key(const std::string& key)
{
    if (key == "rho_b" || key == "rho_u")
        return key + "_db";
    return key;
}

}  // namespace

SystemConfig parse_system_config(const nlohmann::json& doc, const std::set<std::string>& passthrough)
{
    if (!doc.is_object())
        throw ConfigError("<root>", "config document must be a JSON object");

    SystemConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (passthrough.count(key))
            continue;
        auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError(key, "unknown configuration key");
        if (!value.is_number())
            throw ConfigError(key, "value must be a number");
        it->second(cfg, value.get<double>());
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        if (file_key(e.key()) != e.key())
            throw ConfigError(file_key(e.key()), e.what());
        throw;
    }
    return cfg;
}

nlohmann::json system_config_to_json(const SystemConfig& cfg)
{
    return {
        {"theta1", cfg.theta1},       {"theta3", cfg.theta3},       {"theta2", cfg.theta2},
        {"theta3p", cfg.theta3p},     {"rho_b_db", linear_to_db(cfg.rho_b)},
        {"rho_u_db", linear_to_db(cfg.rho_u)},
        {"lambda_b1", cfg.lambda_b1}, {"lambda_b2", cfg.lambda_b2}, {"lambda_21", cfg.lambda_21},
        {"lambda_23", cfg.lambda_23}, {"lambda_2d", cfg.lambda_2d}, {"lambda_22", cfg.lambda_22},
        {"sigma1", cfg.sigma1},       {"sigma2", cfg.sigma2},       {"sigma3", cfg.sigma3},
        {"r1", cfg.r1},               {"r3", cfg.r3},               {"rd", cfg.rd},
    };
}

}  // namespace dfcnoma
