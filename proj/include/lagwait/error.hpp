#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lagwait {

enum class ErrorKind {
    InvalidArgument,
    InvalidMesh,
    ShapeError,
    UnsupportedMesh,
    DomainError,
    OrderingViolation,
    NumericFailure,
    StiffnessFailure,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind is the
/// machine-readable part; the message carries the diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The diagnostic without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace lagwait
