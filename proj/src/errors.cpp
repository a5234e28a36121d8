#include "sidechan/errors.hpp"

namespace sidechan {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::AllZeroSignal: return "AllZeroSignal";
        case ErrorCode::NegativeValue: return "NegativeValue";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::BadAxis: return "BadAxis";
        case ErrorCode::UnitMismatch: return "UnitMismatch";
        case ErrorCode::NoOverlap: return "NoOverlap";
        case ErrorCode::NoCrossing: return "NoCrossing";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NonPositivePeriod: return "NonPositivePeriod";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::MissingInput: return "MissingInput";
        case ErrorCode::TooManyParameters: return "TooManyParameters";
        case ErrorCode::MissingParameter: return "MissingParameter";
        case ErrorCode::GridTooNarrow: return "GridTooNarrow";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::BadHeader: return "BadHeader";
        case ErrorCode::NonUniformAxis: return "NonUniformAxis";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::UnparseableRow: return "UnparseableRow";
        case ErrorCode::RaggedRows: return "RaggedRows";
        case ErrorCode::MissingDiode: return "MissingDiode";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::BadManifest: return "BadManifest";
        case ErrorCode::BadSweep: return "BadSweep";
    }
    return "UnknownError";
}

}  // namespace sidechan
