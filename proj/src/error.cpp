#include "wia/error.hpp"

namespace wia {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OddDimension:     return "OddDimension";
        case ErrorKind::ShapeMismatch:    return "ShapeMismatch";
        case ErrorKind::ShapeError:       return "ShapeError";
        case ErrorKind::IndivisibleGrid:  return "IndivisibleGrid";
        case ErrorKind::IndivisiblePatch: return "IndivisiblePatch";
        case ErrorKind::TooSmall:         return "TooSmall";
        case ErrorKind::CropTooLarge:     return "CropTooLarge";
        case ErrorKind::ConfigError:      return "ConfigError";
        case ErrorKind::InvalidSigma:     return "InvalidSigma";
        case ErrorKind::InvalidDose:      return "InvalidDose";
        case ErrorKind::DegenerateRange:  return "DegenerateRange";
        case ErrorKind::EmptyPositiveSet: return "EmptyPositiveSet";
        case ErrorKind::InvalidArgument:  return "InvalidArgument";
        case ErrorKind::FormatError:      return "FormatError";
        case ErrorKind::IoError:          return "IoError";
        case ErrorKind::NonFinite:        return "NonFinite";
        case ErrorKind::NonFiniteLoss:    return "NonFiniteLoss";
    }
    return "Error";
}

ErrorClass error_kind_class(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OddDimension:
        case ErrorKind::ShapeMismatch:
        case ErrorKind::ShapeError:
        case ErrorKind::IndivisibleGrid:
        case ErrorKind::IndivisiblePatch:
        case ErrorKind::TooSmall:
        case ErrorKind::CropTooLarge:
            return ErrorClass::Shape;
        case ErrorKind::ConfigError:
        case ErrorKind::InvalidSigma:
        case ErrorKind::InvalidDose:
        case ErrorKind::DegenerateRange:
        case ErrorKind::EmptyPositiveSet:
        case ErrorKind::InvalidArgument:
            return ErrorClass::Config;
        case ErrorKind::FormatError:
        case ErrorKind::IoError:
            return ErrorClass::Data;
        case ErrorKind::NonFinite:
        case ErrorKind::NonFiniteLoss:
            return ErrorClass::Numeric;
    }
    return ErrorClass::Config;
}

}  // namespace wia
