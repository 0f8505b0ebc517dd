#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace memnoise::jsonschema {

/// Validates `doc` against the subset of JSON Schema the shipped result
/// schema uses: type, required, properties, items, enum, minItems,
/// additionalProperties (boolean form). Returns human-readable problems;
/// empty means valid.
std::vector<std::string> validate(const nlohmann::json& schema, const nlohmann::json& doc);

}  // namespace memnoise::jsonschema
