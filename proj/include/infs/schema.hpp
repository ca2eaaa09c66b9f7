#pragma once

#include <string>

#include <json.hpp>

#include "infs/errors.hpp"

namespace infs {

// Minimal JSON-Schema checker covering the subset the report schemas use:
// "type" (single name or list), "properties" + "required" +
// "additionalProperties": false, "items", and "enum". Violations carry the
// JSON-pointer-style path of the offending node.
namespace detail {

inline bool matches_type(const nlohmann::json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    if (type == "null") return value.is_null();
    throw SchemaViolation("schema uses unknown type name \"" + type + "\"");
}

inline std::string json_type_name(const nlohmann::json& value) {
    if (value.is_object()) return "object";
    if (value.is_array()) return "array";
    if (value.is_string()) return "string";
    if (value.is_boolean()) return "boolean";
    if (value.is_number()) return "number";
    if (value.is_null()) return "null";
    return "unknown";
}

inline void validate_node(const nlohmann::json& value, const nlohmann::json& schema,
                          const std::string& path) {
    if (!schema.is_object()) throw SchemaViolation("schema node at " + path + " is not an object");

    if (auto it = schema.find("type"); it != schema.end()) {
        bool ok = false;
        if (it->is_array()) {
            for (const auto& t : *it) ok = ok || matches_type(value, t.get<std::string>());
        } else {
            ok = matches_type(value, it->get<std::string>());
        }
        if (!ok) {
            throw SchemaViolation("at " + path + ": expected type " + it->dump() + ", got " +
                                  json_type_name(value));
        }
    }

    if (auto it = schema.find("enum"); it != schema.end()) {
        bool ok = false;
        for (const auto& allowed : *it) ok = ok || allowed == value;
        if (!ok) {
            throw SchemaViolation("at " + path + ": value " + value.dump() +
                                  " not in enum " + it->dump());
        }
    }

    if (value.is_object()) {
        const auto props = schema.find("properties");
        if (auto req = schema.find("required"); req != schema.end()) {
            for (const auto& key : *req) {
                if (!value.contains(key.get<std::string>())) {
                    throw SchemaViolation("at " + path + ": missing required field \"" +
                                          key.get<std::string>() + "\"");
                }
            }
        }
        if (props != schema.end()) {
            bool open = true;
            if (auto ap = schema.find("additionalProperties"); ap != schema.end()) {
                open = ap->is_boolean() ? ap->get<bool>() : true;
            }
            for (auto it = value.begin(); it != value.end(); ++it) {
                auto prop = props->find(it.key());
                if (prop != props->end()) {
                    validate_node(it.value(), *prop, path + "/" + it.key());
                } else if (!open) {
                    throw SchemaViolation("at " + path + ": unexpected field \"" + it.key() + "\"");
                }
            }
        }
    }

    if (value.is_array()) {
        if (auto items = schema.find("items"); items != schema.end()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                validate_node(value[i], *items, path + "/" + std::to_string(i));
            }
        }
    }
}

}  // namespace detail

inline void validate_against_schema(const nlohmann::json& value, const nlohmann::json& schema) {
    detail::validate_node(value, schema, "");
}

}  // namespace infs
