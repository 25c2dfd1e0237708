#pragma once

#include <stdexcept>
#include <string>

namespace meln {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define MELN_DEFINE_ERROR(Name)                                         \
    struct Name final : Error {                                         \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

// exact algebra
MELN_DEFINE_ERROR(DivisionByZero);
MELN_DEFINE_ERROR(IdenticallyZero);
MELN_DEFINE_ERROR(SingularMatrix);

// geometry / oracle
MELN_DEFINE_ERROR(OutOfAnnulus);
MELN_DEFINE_ERROR(OutsideCurve);
MELN_DEFINE_ERROR(EndpointSingularity);
MELN_DEFINE_ERROR(InvalidIndex);

// reduction / assembly
MELN_DEFINE_ERROR(BoundViolation);
MELN_DEFINE_ERROR(DegenerateForm);

// analytic structure
MELN_DEFINE_ERROR(DegenerateRatio);
MELN_DEFINE_ERROR(EmptyNullspace);
MELN_DEFINE_ERROR(DegreeOverflow);
MELN_DEFINE_ERROR(ZeroBeta);

// simulator
MELN_DEFINE_ERROR(LeftDomain);
MELN_DEFINE_ERROR(StepLimit);
MELN_DEFINE_ERROR(NonTransversal);

// io / cli
MELN_DEFINE_ERROR(ParseError);
MELN_DEFINE_ERROR(UsageError);

#undef MELN_DEFINE_ERROR

}  // namespace meln
