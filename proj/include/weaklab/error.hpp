#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weaklab {

enum class ErrorCode {
    NonHermitianInput,
    EmptyList,
    UnnormalizedKet,
    InvalidState,
    InvalidPovm,
    DimensionMismatch,
    ZeroPostSelectionProbability,
    NotAProjector,
    PatternLengthMismatch,
    UnsupportedKind,
    InvalidDimensions,
    InvalidArgument,
    ScenarioTooLarge,
    UnknownScenario,
    UnknownParameter,
    ParseError,
    NumericFailure,
};

std::string_view to_string(ErrorCode code);

// True for errors caused by malformed input (CLI exit code 2); false for
// numeric failures on well-formed input (exit code 1).
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace weaklab
