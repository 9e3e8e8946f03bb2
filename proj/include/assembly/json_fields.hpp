#pragma once

#include "assembly/error.hpp"
#include "assembly/json.hpp"

#include <cstddef>
#include <string>

// Typed field access for hand-written schemas. Failures throw SchemaError
// naming the field and `where`.
namespace assembly::json_fields {

inline const Json& require(const Json& object, const char* key, const std::string& where) {
    if (!object.is_object()) {
        throw SchemaError(where + ": expected an object");
    }
    const auto it = object.find(key);
    if (it == object.end()) {
        throw SchemaError(where + ": missing field '" + key + "'");
    }
    return *it;
}

inline std::string require_string(const Json& object, const char* key, const std::string& where) {
    const Json& value = require(object, key, where);
    if (!value.is_string()) {
        throw SchemaError(where + ": field '" + key + "' must be a string");
    }
    return value.get<std::string>();
}

inline std::size_t require_index(const Json& object, const char* key, const std::string& where) {
    const Json& value = require(object, key, where);
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        throw SchemaError(where + ": field '" + key + "' must be a non-negative integer");
    }
    return value.get<std::size_t>();
}

inline long long require_integer(const Json& object, const char* key, const std::string& where) {
    const Json& value = require(object, key, where);
    if (!value.is_number_integer()) {
        throw SchemaError(where + ": field '" + key + "' must be an integer");
    }
    return value.get<long long>();
}

inline double require_number(const Json& object, const char* key, const std::string& where) {
    const Json& value = require(object, key, where);
    if (!value.is_number()) {
        throw SchemaError(where + ": field '" + key + "' must be a number");
    }
    return value.get<double>();
}

inline bool require_bool(const Json& object, const char* key, const std::string& where) {
    const Json& value = require(object, key, where);
    if (!value.is_boolean()) {
        throw SchemaError(where + ": field '" + key + "' must be a boolean");
    }
    return value.get<bool>();
}

inline const Json& require_array(const Json& object, const char* key, const std::string& where) {
    const Json& value = require(object, key, where);
    if (!value.is_array()) {
        throw SchemaError(where + ": field '" + key + "' must be an array");
    }
    return value;
}

} // namespace assembly::json_fields
