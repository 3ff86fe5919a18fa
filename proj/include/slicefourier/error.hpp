#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slicefourier {

enum class ErrorCode {
    InvalidArgument,
    ConfigError,
    NonconvergentTolerance,
    MissingMoment,
    PrefixOutsideSupport,
    DimensionTooSmall,
    UnsupportedMeasure,
    QuadratureBudgetExceeded,
    PointOutsideDisk,
    SingularReciprocal,
    RadiusTooCloseToOne,
    NotSymmetric,
};

std::string_view to_string(ErrorCode code);

// Numeric-budget failures map to CLI exit code 3, everything else to 2.
bool is_numeric_budget(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace slicefourier
