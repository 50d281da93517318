#pragma once

// Just enough of JSON Schema (type / required / properties / items / enum /
// minItems) to validate the shipped output schemas in tests. Returns an empty
// string when the value conforms, else the first violation with its path.

#include <fstream>
#include <string>

#include <json.hpp>

namespace mivt_test {

inline std::string schema_violation(const nlohmann::json& value, const nlohmann::json& schema,
                                    const std::string& path = "$") {
    using nlohmann::json;
    if (schema.contains("enum")) {
        bool found = false;
        for (const json& option : schema["enum"])
            if (option == value) found = true;
        if (!found) return path + ": value not in enum";
    }
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        const bool ok = (t == "object" && value.is_object()) ||
                        (t == "array" && value.is_array()) ||
                        (t == "number" && value.is_number()) ||
                        (t == "integer" && value.is_number_integer()) ||
                        (t == "string" && value.is_string()) ||
                        (t == "boolean" && value.is_boolean()) || (t == "null" && value.is_null());
        if (!ok) return path + ": expected type " + t;
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const json& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    return path + ": missing required field " + key.get<std::string>();
        if (schema.contains("properties"))
            for (auto& [key, sub] : schema["properties"].items())
                if (value.contains(key)) {
                    const std::string err = schema_violation(value.at(key), sub, path + "." + key);
                    if (!err.empty()) return err;
                }
    }
    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>())
            return path + ": fewer than minItems elements";
        if (schema.contains("items"))
            for (std::size_t i = 0; i < value.size(); ++i) {
                const std::string err = schema_violation(
                    value[i], schema["items"], path + "[" + std::to_string(i) + "]");
                if (!err.empty()) return err;
            }
    }
    return "";
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace mivt_test
