#pragma once

#include "stochcirc/circuit.hpp"

#include "json.hpp"

namespace stochcirc {

/// Format tag written into every model document.
inline constexpr const char* kModelFormat = "stochcirc.model/1";

/// Serializes the circuit description plus derived flags (see README, "Model JSON").
nlohmann::json model_to_json(const PhaseSpaceModel& model);

/// Reads a model document; derived fields ("flags", "derived") are ignored on input.
CircuitSpec spec_from_json(const nlohmann::json& doc);

nlohmann::json function_to_json(const ScalarFunction& f);
ScalarFunction function_from_json(const nlohmann::json& j, Interval domain);

}  // namespace stochcirc
