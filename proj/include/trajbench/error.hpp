#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trajbench {

enum class ErrorCode {
    DegenerateDataset,
    DegenerateExtent,
    SampleTooLarge,
    InvalidParams,
    NoValidNeighbor,
    DuplicateTrajectory,
    NotFound,
    InsufficientData,
    UnsatisfiableWorkload,
    EmptyGroup,
    InsufficientPoints,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DegenerateDataset: return "DegenerateDataset";
    case ErrorCode::DegenerateExtent: return "DegenerateExtent";
    case ErrorCode::SampleTooLarge: return "SampleTooLarge";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NoValidNeighbor: return "NoValidNeighbor";
    case ErrorCode::DuplicateTrajectory: return "DuplicateTrajectory";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::UnsatisfiableWorkload: return "UnsatisfiableWorkload";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace trajbench
