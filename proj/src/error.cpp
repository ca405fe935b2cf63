#include "bilearn/error.hpp"

namespace bilearn {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::EmptyLabel: return "EmptyLabel";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::BadPosition: return "BadPosition";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::EmptyCodomain: return "EmptyCodomain";
    case ErrorKind::HeadMismatch: return "HeadMismatch";
    case ErrorKind::LeftLegPutGetViolation: return "LeftLegPutGetViolation";
    case ErrorKind::NotConstantComplement: return "NotConstantComplement";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NonPositiveEps: return "NonPositiveEps";
    case ErrorKind::EpsMismatch: return "EpsMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DivergenceDetected: return "DivergenceDetected";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnresolvedName: return "UnresolvedName";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::MissingMapping: return "MissingMapping";
    case ErrorKind::UnknownName: return "UnknownName";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

} // namespace bilearn
