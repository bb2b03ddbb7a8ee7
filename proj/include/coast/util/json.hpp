#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace coast {

using Json = nlohmann::json;

namespace util {

// Strict, path-aware view over a JSON value. Every failure throws
// SchemaError naming the offending location, e.g. "$.scenes[1].rect".
class JsonReader {
public:
    JsonReader(const Json& value, std::string path) : value_(&value), path_(std::move(path)) {}

    const Json& json() const { return *value_; }
    const std::string& path() const { return path_; }

    bool has(std::string_view key) const;
    JsonReader at(std::string_view key) const;
    std::optional<JsonReader> maybe(std::string_view key) const;
    std::vector<JsonReader> elements() const;

    // Rejects any object key outside `allowed`.
    const JsonReader& only(std::initializer_list<std::string_view> allowed) const;

    std::string str() const;
    std::string nonempty_str() const;
    long long integer() const;
    int int32() const;
    double number() const;
    bool boolean() const;
    std::vector<std::string> strings() const;

    std::string str_or(std::string_view key, std::string fallback) const;
    long long integer_or(std::string_view key, long long fallback) const;
    double number_or(std::string_view key, double fallback) const;
    bool boolean_or(std::string_view key, bool fallback) const;

    void expect_object() const;
    void expect_array() const;
    [[noreturn]] void fail(const std::string& message) const;

private:
    const Json* value_;
    std::string path_;
};

// Deterministic text form: sorted keys (nlohmann's default map), no whitespace.
inline std::string canonical_dump(const Json& value) {
    return value.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace util
}  // namespace coast
