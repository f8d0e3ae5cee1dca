#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cevarep {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NotOnLine,
    DegenerateEndpoints,
    RankDeficient,
    OutOfDomain,
    EmptyDomain,
    RegionEscapesDomain,
    CollinearVertices,
    ConditionViolated,
    EqualImages,
    NotOnOpenSegment,
    DegenerateGrid,
    CollinearRange,
    BothBranchesDegenerate,
    ExponentMismatch,
    ValidationFailed,
    PositivityViolated,
    OracleFailure,
    UnknownName,
    SyntaxError,
    UnknownIdentifier,
    ArityError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind is stable and used for
/// JSON error reports and exit-code mapping.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse errors additionally carry a 1-based source position.
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, const std::string& message, int line, int column)
        : Error(kind, message + " at line " + std::to_string(line) + ", column " +
                          std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace cevarep
