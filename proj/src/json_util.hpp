#pragma once

// Shared helpers for reading the library's JSON documents.

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rainbow_net/errors.hpp"
#include "rainbow_net/rational.hpp"

namespace rnf::detail {

using json = nlohmann::json;

inline std::size_t line_at(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

inline json parse_document(std::string_view text, std::string_view what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": line " + std::to_string(line_at(text, e.byte)) + ": " + e.what());
    }
}

inline const json& field(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.is_object()) throw ParseError(ctx + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(ctx + ": missing field '" + key + "'");
    return *it;
}

inline const json& array_field(const json& obj, const char* key, const std::string& ctx) {
    const json& v = field(obj, key, ctx);
    if (!v.is_array()) throw ParseError(ctx + "." + key + ": expected an array");
    return v;
}

/// Identifiers may be written as strings or integers.
inline std::string as_name(const json& v, const std::string& ctx) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    throw ParseError(ctx + ": expected a string or integer identifier");
}

/// Decimal strings are exact; JSON numbers are accepted via their literal text.
inline Rational as_rational(const json& v, const std::string& ctx) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number()) return Rational::parse(v.dump());
    } catch (const std::exception& e) {
        throw ParseError(ctx + ": " + e.what());
    }
    throw ParseError(ctx + ": expected a decimal string");
}

inline std::int64_t as_int(const json& v, const std::string& ctx) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw ParseError(ctx + ": expected an integer");
    return v.get<std::int64_t>();
}

}  // namespace rnf::detail
