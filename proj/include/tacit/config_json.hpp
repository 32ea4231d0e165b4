#ifndef TACIT_CONFIG_JSON_HPP
#define TACIT_CONFIG_JSON_HPP

#include <json.hpp>

#include "tacit/world.hpp"

namespace tacit {

nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// Starts from `base` and overrides every key present in `j`. Unknown keys are rejected.
ScenarioConfig scenario_from_json(const nlohmann::json& j, ScenarioConfig base = ScenarioConfig::canonical());

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

}  // namespace tacit

#endif  // TACIT_CONFIG_JSON_HPP
