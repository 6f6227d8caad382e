#include "looprod/errors.hpp"

namespace looprod {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownFamily: return "UnknownFamily";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::ZeroLength: return "ZeroLength";
        case ErrorCode::EmptyPath: return "EmptyPath";
        case ErrorCode::DegenerateN: return "DegenerateN";
        case ErrorCode::NonpositiveLooSum: return "NonpositiveLooSum";
        case ErrorCode::NonpositiveMu: return "NonpositiveMu";
        case ErrorCode::NonpositiveDraw: return "NonpositiveDraw";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::UnsortedGrid: return "UnsortedGrid";
        case ErrorCode::NonSequentialN: return "NonSequentialN";
        case ErrorCode::Empty: return "Empty";
        case ErrorCode::UnsupportedKind: return "UnsupportedKind";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace looprod
