#include "slicefourier/error.hpp"

namespace slicefourier {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::ConfigError: return "config-error";
    case ErrorCode::NonconvergentTolerance: return "nonconvergent-tolerance";
    case ErrorCode::MissingMoment: return "missing-moment";
    case ErrorCode::PrefixOutsideSupport: return "prefix-outside-support";
    case ErrorCode::DimensionTooSmall: return "dimension-too-small";
    case ErrorCode::UnsupportedMeasure: return "unsupported-measure";
    case ErrorCode::QuadratureBudgetExceeded: return "quadrature-budget-exceeded";
    case ErrorCode::PointOutsideDisk: return "point-outside-disk";
    case ErrorCode::SingularReciprocal: return "singular-reciprocal";
    case ErrorCode::RadiusTooCloseToOne: return "radius-too-close-to-one";
    case ErrorCode::NotSymmetric: return "not-symmetric";
    }
    return "unknown";
}

bool is_numeric_budget(ErrorCode code) {
    return code == ErrorCode::NonconvergentTolerance ||
           code == ErrorCode::QuadratureBudgetExceeded ||
           code == ErrorCode::RadiusTooCloseToOne;
}

}  // namespace slicefourier
