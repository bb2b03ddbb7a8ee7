#include "coast/util/json.hpp"

#include <cmath>
#include <limits>

#include "coast/util/error.hpp"

namespace coast::util {

void JsonReader::fail(const std::string& message) const {
    throw SchemaError(path_ + ": " + message);
}

void JsonReader::expect_object() const {
    if (!value_->is_object()) fail("expected object");
}

void JsonReader::expect_array() const {
    if (!value_->is_array()) fail("expected array");
}

bool JsonReader::has(std::string_view key) const {
    return value_->is_object() && value_->contains(key);
}

JsonReader JsonReader::at(std::string_view key) const {
    expect_object();
    auto it = value_->find(key);
    if (it == value_->end()) fail("missing required field '" + std::string(key) + "'");
    return JsonReader(*it, path_ + "." + std::string(key));
}

std::optional<JsonReader> JsonReader::maybe(std::string_view key) const {
    expect_object();
    auto it = value_->find(key);
    if (it == value_->end() || it->is_null()) return std::nullopt;
    return JsonReader(*it, path_ + "." + std::string(key));
}

std::vector<JsonReader> JsonReader::elements() const {
    expect_array();
    std::vector<JsonReader> out;
    out.reserve(value_->size());
    for (std::size_t i = 0; i < value_->size(); ++i) {
        out.emplace_back((*value_)[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
}

const JsonReader& JsonReader::only(std::initializer_list<std::string_view> allowed) const {
    expect_object();
    for (const auto& [key, _] : value_->items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) fail("unknown field '" + key + "'");
    }
    return *this;
}

std::string JsonReader::str() const {
    if (!value_->is_string()) fail("expected string");
    return value_->get<std::string>();
}

std::string JsonReader::nonempty_str() const {
    auto s = str();
    if (s.empty()) fail("expected non-empty string");
    return s;
}

long long JsonReader::integer() const {
    if (value_->is_number_integer()) return value_->get<long long>();
    if (value_->is_number_float()) {
        double d = value_->get<double>();
        if (std::isfinite(d) && std::floor(d) == d && std::fabs(d) < 9.0e15) {
            return static_cast<long long>(d);
        }
    }
    fail("expected integer");
}

int JsonReader::int32() const {
    long long v = integer();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        fail("integer out of range");
    }
    return static_cast<int>(v);
}

double JsonReader::number() const {
    if (!value_->is_number()) fail("expected number");
    double d = value_->get<double>();
    if (!std::isfinite(d)) fail("expected finite number");
    return d;
}

bool JsonReader::boolean() const {
    if (!value_->is_boolean()) fail("expected boolean");
    return value_->get<bool>();
}

std::vector<std::string> JsonReader::strings() const {
    std::vector<std::string> out;
    for (const auto& e : elements()) out.push_back(e.str());
    return out;
}

std::string JsonReader::str_or(std::string_view key, std::string fallback) const {
    auto f = maybe(key);
    return f ? f->str() : fallback;
}

long long JsonReader::integer_or(std::string_view key, long long fallback) const {
    auto f = maybe(key);
    return f ? f->integer() : fallback;
}

double JsonReader::number_or(std::string_view key, double fallback) const {
    auto f = maybe(key);
    return f ? f->number() : fallback;
}

bool JsonReader::boolean_or(std::string_view key, bool fallback) const {
    auto f = maybe(key);
    return f ? f->boolean() : fallback;
}

}  // namespace coast::util
