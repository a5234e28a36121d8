#pragma once

#include <stdexcept>
#include <string>

namespace sidechan {

// Every failure mode of the library maps to one of these codes. The CLI
// renders any sidechan::Error as a validation failure (exit code 2);
// anything else escaping to main is an internal error (exit code 1).
enum class ErrorCode {
    // signal / numerics
    AllZeroSignal,
    NegativeValue,
    NonFiniteValue,
    BadAxis,
    UnitMismatch,
    NoOverlap,
    NoCrossing,
    NotNormalized,
    EmptyInput,
    NonPositivePeriod,
    GridMismatch,
    OutOfRange,
    // leakage
    MissingInput,
    TooManyParameters,
    MissingParameter,
    // synth
    GridTooNarrow,
    TooFewSamples,
    UnknownPreset,
    // ingest
    BadHeader,
    NonUniformAxis,
    TooFewRows,
    UnparseableRow,
    RaggedRows,
    MissingDiode,
    DuplicateLabel,
    FileNotFound,
    BadManifest,
    // cli
    BadSweep,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace sidechan
