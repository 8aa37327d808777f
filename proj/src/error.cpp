#include "lagwait/error.hpp"

namespace lagwait {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::InvalidMesh: return "invalid-mesh";
        case ErrorKind::ShapeError: return "shape-error";
        case ErrorKind::UnsupportedMesh: return "unsupported-mesh";
        case ErrorKind::DomainError: return "domain-error";
        case ErrorKind::OrderingViolation: return "ordering-violation";
        case ErrorKind::NumericFailure: return "numeric-failure";
        case ErrorKind::StiffnessFailure: return "stiffness-failure";
        case ErrorKind::ConfigError: return "config-error";
        case ErrorKind::IoError: return "io-error";
    }
    return "unknown";
}

}  // namespace lagwait
