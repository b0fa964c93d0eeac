#include "weaklab/error.hpp"

namespace weaklab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonHermitianInput: return "NonHermitianInput";
        case ErrorCode::EmptyList: return "EmptyList";
        case ErrorCode::UnnormalizedKet: return "UnnormalizedKet";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::InvalidPovm: return "InvalidPovm";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroPostSelectionProbability: return "ZeroPostSelectionProbability";
        case ErrorCode::NotAProjector: return "NotAProjector";
        case ErrorCode::PatternLengthMismatch: return "PatternLengthMismatch";
        case ErrorCode::UnsupportedKind: return "UnsupportedKind";
        case ErrorCode::InvalidDimensions: return "InvalidDimensions";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ScenarioTooLarge: return "ScenarioTooLarge";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::UnknownParameter: return "UnknownParameter";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NumericFailure: return "NumericFailure";
    }
    return "UnknownError";
}

bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroPostSelectionProbability:
        case ErrorCode::NumericFailure:
            return false;
        default:
            return true;
    }
}

}  // namespace weaklab
