#pragma once

#include <stdexcept>
#include <string>

namespace coast {

// Root of every error this library throws. `code()` is a stable
// machine-readable tag ("SchemaError", "Unsolvable", ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define COAST_DEFINE_ERROR(Name)                                              \
    class Name : public ::coast::Error {                                      \
    public:                                                                   \
        explicit Name(const std::string& message) : Error(#Name, message) {}  \
    }

COAST_DEFINE_ERROR(SchemaError);

}  // namespace coast
