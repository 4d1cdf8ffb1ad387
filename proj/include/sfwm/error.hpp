#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfwm {

enum class ErrorCode {
    OutOfRange,
    NoData,
    NoGuidedMode,
    NotConverged,
    BoundaryLeak,
    GridMismatch,
    NonMonotoneBeta,
    NoRoot,
    EmptyResult,
    FilterOutsideGrid,
    QuadratureNotConverged,
    InvalidArgument,
    Config,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the toolkit carries one of the codes above so the
// command line front end can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::NoGuidedMode: return "NoGuidedMode";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::BoundaryLeak: return "BoundaryLeak";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonMonotoneBeta: return "NonMonotoneBeta";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::FilterOutsideGrid: return "FilterOutsideGrid";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    }
    return "Unknown";
}

} // namespace sfwm
