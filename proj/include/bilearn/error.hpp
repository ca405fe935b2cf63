#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bilearn {

enum class ErrorKind {
    DuplicateLabel,
    EmptyLabel,
    LengthMismatch,
    IndexOutOfRange,
    TypeMismatch,
    BadPosition,
    CapExceeded,
    EmptyCodomain,
    HeadMismatch,
    LeftLegPutGetViolation,
    NotConstantComplement,
    DimMismatch,
    NonPositiveEps,
    EpsMismatch,
    NonFinite,
    DivergenceDetected,
    ParseError,
    UnresolvedName,
    ShapeError,
    MissingMapping,
    UnknownName,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it onto an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace bilearn
