// error.hpp - error codes shared by every schurlab module

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace schurlab {

enum class ErrorCode {
    NotSquare,
    NotNormal,
    EigFailure,
    ShapeMismatch,
    EvaluationFailure,
    BadPosition,
    OrderTooLarge,
    NumericalBreakdown,
    NotPsd,
    ParseError,
    BudgetExceeded,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::EigFailure: return "EigFailure";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EvaluationFailure: return "EvaluationFailure";
    case ErrorCode::BadPosition: return "BadPosition";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    }
    return "Unknown";
}

/// Short "%.3g" rendering for diagnostics.
inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace schurlab
