#pragma once

#include <stdexcept>
#include <string>

namespace infs {

// Error taxonomy maps onto CLI exit codes: validation -> 1, io -> 2.
class Error : public std::runtime_error {
public:
    enum class Kind { validation, io };

    Error(Kind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::string message)
        : Error(Kind::validation, std::move(message)) {}
};

class IoError : public Error {
public:
    explicit IoError(std::string message)
        : Error(Kind::io, std::move(message)) {}
};

// A persisted file does not match its schema (missing fields, bad types,
// inconsistent rank values, unknown schema_version).
class SchemaViolation : public ValidationError {
public:
    explicit SchemaViolation(std::string message)
        : ValidationError(std::move(message)) {}
};

// Two batch states were produced under incompatible configurations and
// must not be merged silently.
class ConfigMismatch : public ValidationError {
public:
    explicit ConfigMismatch(std::string message)
        : ValidationError(std::move(message)) {}
};

}  // namespace infs
