#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace revspec {

// Numerical and domain failures carry a stable short code; reports quote the
// code verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define REVSPEC_DEFINE_ERROR(Name)                                         \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    };

REVSPEC_DEFINE_ERROR(NonUnimodal)
REVSPEC_DEFINE_ERROR(BoundarySlope)
REVSPEC_DEFINE_ERROR(Negative)
REVSPEC_DEFINE_ERROR(OutOfDomain)
REVSPEC_DEFINE_ERROR(OutOfRange)
REVSPEC_DEFINE_ERROR(PoleProximity)
REVSPEC_DEFINE_ERROR(StepFailure)
REVSPEC_DEFINE_ERROR(MaxTimeExceeded)
REVSPEC_DEFINE_ERROR(NotClosed)
REVSPEC_DEFINE_ERROR(OnEquatorOrbit)
REVSPEC_DEFINE_ERROR(QuadratureFailure)
REVSPEC_DEFINE_ERROR(DomainError)
REVSPEC_DEFINE_ERROR(KernelSingularity)
REVSPEC_DEFINE_ERROR(CoprimalityError)
REVSPEC_DEFINE_ERROR(FitUnstable)
REVSPEC_DEFINE_ERROR(MonotonicityFailure)
REVSPEC_DEFINE_ERROR(ConstraintViolation)
REVSPEC_DEFINE_ERROR(NonMonotoneSlopes)
REVSPEC_DEFINE_ERROR(ConfigError)

#undef REVSPEC_DEFINE_ERROR

} // namespace revspec
