#pragma once

// Strict field access for the input documents. Every helper throws
// SchemaError with a JSON-pointer-like location on mismatch.

#include "soata/error.hpp"

#include <nlohmann/json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace soata::detail {

using nlohmann::json;

inline json parse_document(std::string_view document, std::string_view what) {
    if (document.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw ParseError(std::string(what) + ": empty document");
    }
    try {
        return json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

inline void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw SchemaError(where + ": expected an object");
    }
}

inline void check_keys(const json& j, const std::string& where,
                       std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw SchemaError(where + ": unknown field \"" + key + "\"");
        }
    }
}

inline std::string get_string(const json& j, const std::string& where, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw SchemaError(where + ": missing field \"" + key + "\"");
    }
    if (!it->is_string()) {
        throw SchemaError(where + "/" + key + ": expected a string");
    }
    return it->get<std::string>();
}

inline bool get_bool(const json& j, const std::string& where, const char* key, bool fallback) {
    auto it = j.find(key);
    if (it == j.end()) {
        return fallback;
    }
    if (!it->is_boolean()) {
        throw SchemaError(where + "/" + key + ": expected a boolean");
    }
    return it->get<bool>();
}

// Missing array reads as empty.
inline const json& get_array(const json& j, const std::string& where, const char* key) {
    static const json empty = json::array();
    auto it = j.find(key);
    if (it == j.end()) {
        return empty;
    }
    if (!it->is_array()) {
        throw SchemaError(where + "/" + key + ": expected an array");
    }
    return *it;
}

inline std::vector<std::string> get_string_array(const json& j, const std::string& where,
                                                 const char* key) {
    std::vector<std::string> out;
    const auto& arr = get_array(j, where, key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) {
            throw SchemaError(where + "/" + key + "/" + std::to_string(i) + ": expected a string");
        }
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

inline void require_schema_version(const json& j, const std::string& where, bool required) {
    auto it = j.find("schema");
    if (it == j.end()) {
        if (required) {
            throw SchemaError(where + ": missing field \"schema\"");
        }
        return;
    }
    if (!it->is_number_integer() || it->get<long long>() != 1) {
        throw SchemaError(where + "/schema: unsupported version (expected 1)");
    }
}

} // namespace soata::detail
