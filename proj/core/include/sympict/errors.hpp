#pragma once

#include <stdexcept>

namespace sympict {

#define SYMPICT_DEFINE_ERROR(NAME)                                  \
    struct NAME : std::runtime_error {                              \
        using std::runtime_error::runtime_error;                    \
    }

// Construction / configuration
SYMPICT_DEFINE_ERROR(InvalidParameter);
SYMPICT_DEFINE_ERROR(UnknownCatalogId);

// Differentiation and Legendre machinery
SYMPICT_DEFINE_ERROR(NonFiniteDerivative);
SYMPICT_DEFINE_ERROR(NonFiniteValue);
SYMPICT_DEFINE_ERROR(NoConvergence);
SYMPICT_DEFINE_ERROR(SingularJacobian);
SYMPICT_DEFINE_ERROR(InsufficientSamples);

// Numeric kernel
SYMPICT_DEFINE_ERROR(MaxStepsExceeded);
SYMPICT_DEFINE_ERROR(NonFiniteState);
SYMPICT_DEFINE_ERROR(MethodMismatch);
SYMPICT_DEFINE_ERROR(MaxDepthExceeded);
SYMPICT_DEFINE_ERROR(SingularMatrix);

// Picture engines
SYMPICT_DEFINE_ERROR(PathDisagreement);

// CLI / configuration files
SYMPICT_DEFINE_ERROR(ParseError);
SYMPICT_DEFINE_ERROR(ValidationError);

#undef SYMPICT_DEFINE_ERROR

} // namespace sympict
