#ifndef SISPATCH_ERRORS_HPP
#define SISPATCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sispatch {

enum class ErrorCode {
    DimensionMismatch,
    NegativeOffDiagonal,
    NotIrreducible,
    NonPositiveParameter,
    NoConvergence,
    NegativeEntry,
    SingularV,
    SingularSystem,
    NotARoot,
    InvalidInitialData,
    StepUnderflow,
    DegenerateOmegaStar,
    NoBracket,
    NoInteriorRoot,
    NoPositiveSolution,
    BadConfig,
};

/// Whether an error code signals invalid input (as opposed to a numerical failure).
inline bool is_validation_error(ErrorCode c) {
    switch (c) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NegativeOffDiagonal:
    case ErrorCode::NotIrreducible:
    case ErrorCode::NonPositiveParameter:
    case ErrorCode::InvalidInitialData:
    case ErrorCode::DegenerateOmegaStar:
    case ErrorCode::NoInteriorRoot:
    case ErrorCode::NoPositiveSolution:
    case ErrorCode::BadConfig:
        return true;
    default:
        return false;
    }
}

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::SingularV: return "SingularV";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotARoot: return "NotARoot";
    case ErrorCode::InvalidInitialData: return "InvalidInitialData";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::DegenerateOmegaStar: return "DegenerateOmegaStar";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::NoInteriorRoot: return "NoInteriorRoot";
    case ErrorCode::NoPositiveSolution: return "NoPositiveSolution";
    case ErrorCode::BadConfig: return "BadConfig";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }
    bool is_validation() const { return is_validation_error(code_); }

private:
    ErrorCode code_;
};

} // namespace sispatch

#endif
