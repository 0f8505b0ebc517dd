#include "memnoise/jsonschema.hpp"

namespace memnoise::jsonschema {

namespace {

using nlohmann::json;

bool type_matches(const std::string& type, const json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    if (type == "null") return value.is_null();
    return false;
}

void check(const json& schema, const json& doc, const std::string& where,
           std::vector<std::string>& problems) {
    if (schema.contains("type")) {
        const auto& type = schema.at("type");
        bool ok = false;
        if (type.is_string()) {
            ok = type_matches(type.get<std::string>(), doc);
        } else if (type.is_array()) {
            for (const auto& t : type)
                if (type_matches(t.get<std::string>(), doc)) ok = true;
        }
        if (!ok) {
            problems.push_back(where + ": expected type " + type.dump() + ", got " +
                               std::string(doc.type_name()));
            return;
        }
    }

    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& candidate : schema.at("enum"))
            if (candidate == doc) ok = true;
        if (!ok) problems.push_back(where + ": value " + doc.dump() + " not in enum");
    }

    if (doc.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema.at("required"))
                if (!doc.contains(key.get<std::string>()))
                    problems.push_back(where + ": missing required key '" +
                                       key.get<std::string>() + "'");
        }
        if (schema.contains("properties")) {
            for (const auto& [key, sub] : schema.at("properties").items())
                if (doc.contains(key)) check(sub, doc.at(key), where + "." + key, problems);
        }
        if (schema.contains("additionalProperties") &&
            schema.at("additionalProperties").is_boolean() &&
            !schema.at("additionalProperties").get<bool>() && schema.contains("properties")) {
            for (const auto& [key, value] : doc.items()) {
                (void)value;
                if (!schema.at("properties").contains(key))
                    problems.push_back(where + ": unexpected key '" + key + "'");
            }
        }
    }

    if (doc.is_array()) {
        if (schema.contains("minItems") &&
            doc.size() < schema.at("minItems").get<std::size_t>())
            problems.push_back(where + ": fewer than minItems elements");
        if (schema.contains("items")) {
            std::size_t index = 0;
            for (const auto& element : doc) {
                check(schema.at("items"), element, where + "[" + std::to_string(index) + "]",
                      problems);
                ++index;
            }
        }
    }
}

}  // namespace

std::vector<std::string> validate(const nlohmann::json& schema, const nlohmann::json& doc) {
    std::vector<std::string> problems;
    check(schema, doc, "$", problems);
    return problems;
}

}  // namespace memnoise::jsonschema
