#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace looprod {

enum class ErrorCode {
    UnknownFamily,
    InvalidParams,
    ZeroLength,
    EmptyPath,
    DegenerateN,
    NonpositiveLooSum,
    NonpositiveMu,
    NonpositiveDraw,
    OutOfRange,
    UnsortedGrid,
    NonSequentialN,
    Empty,
    UnsupportedKind,
    IoError,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures are reported with this exception; `code()` identifies the contract violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace looprod
