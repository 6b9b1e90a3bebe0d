#pragma once

#include <stdexcept>
#include <string>

namespace wia {

// Error categories. The integer values double as CLI exit codes and
// C API status codes, so keep them stable.
enum class ErrorClass : int {
    Config  = 2,
    Data    = 3,
    Numeric = 4,
    Shape   = 5,
};

enum class ErrorKind {
    // shape / divisibility
    OddDimension,
    ShapeMismatch,
    ShapeError,
    IndivisibleGrid,
    IndivisiblePatch,
    TooSmall,
    CropTooLarge,
    // configuration / arguments
    ConfigError,
    InvalidSigma,
    InvalidDose,
    DegenerateRange,
    EmptyPositiveSet,
    InvalidArgument,
    // data / I/O
    FormatError,
    IoError,
    // numerics
    NonFinite,
    NonFiniteLoss,
};

const char* error_kind_name(ErrorKind kind);
ErrorClass error_kind_class(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    ErrorClass cls() const { return error_kind_class(kind_); }
    int status() const { return static_cast<int>(cls()); }

private:
    ErrorKind kind_;
};

}  // namespace wia
