#pragma once

#include <stdexcept>
#include <string>

namespace sonotact {

enum class ErrorCode {
    NonPositiveDuration,
    FrequencyAboveNyquist,
    InvalidAmplitude,
    SignalTooShort,
    InvalidBand,
    MissingLabel,
    UnreadableWav,
    EmptyBank,
    IoFailure,
    DegenerateSplit,
    BadMagic,
    ChecksumMismatch,
    TruncatedBlob,
    InvalidArch,
    ShapeMismatch,
    EmptyDataset,
    EmptyEvaluation,
    EmptyMask,
    NonFiniteFeatures,
    InvalidPrimitive,
    ConfigError,
    MissingArtifact,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonPositiveDuration:  return "NonPositiveDuration";
        case ErrorCode::FrequencyAboveNyquist: return "FrequencyAboveNyquist";
        case ErrorCode::InvalidAmplitude:     return "InvalidAmplitude";
        case ErrorCode::SignalTooShort:       return "SignalTooShort";
        case ErrorCode::InvalidBand:          return "InvalidBand";
        case ErrorCode::MissingLabel:         return "MissingLabel";
        case ErrorCode::UnreadableWav:        return "UnreadableWav";
        case ErrorCode::EmptyBank:            return "EmptyBank";
        case ErrorCode::IoFailure:            return "IoFailure";
        case ErrorCode::DegenerateSplit:      return "DegenerateSplit";
        case ErrorCode::BadMagic:             return "BadMagic";
        case ErrorCode::ChecksumMismatch:     return "ChecksumMismatch";
        case ErrorCode::TruncatedBlob:        return "TruncatedBlob";
        case ErrorCode::InvalidArch:          return "InvalidArch";
        case ErrorCode::ShapeMismatch:        return "ShapeMismatch";
        case ErrorCode::EmptyDataset:         return "EmptyDataset";
        case ErrorCode::EmptyEvaluation:      return "EmptyEvaluation";
        case ErrorCode::EmptyMask:            return "EmptyMask";
        case ErrorCode::NonFiniteFeatures:    return "NonFiniteFeatures";
        case ErrorCode::InvalidPrimitive:     return "InvalidPrimitive";
        case ErrorCode::ConfigError:          return "ConfigError";
        case ErrorCode::MissingArtifact:      return "MissingArtifact";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sonotact
