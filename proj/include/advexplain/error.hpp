#pragma once

#include <stdexcept>
#include <string>

namespace advexplain {

// Malformed input text (bad field count, non-numeric value, ...).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Semantically invalid value or configuration.
struct ValueError : std::runtime_error {
    explicit ValueError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / serialization failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Artifacts that do not belong together (e.g. model trained on a different schema).
struct CompatError : std::runtime_error {
    explicit CompatError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace advexplain
