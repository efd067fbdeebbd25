#pragma once

#include <stdexcept>
#include <string>

namespace jetphase {

// Base of every error raised by the library. kind() is a stable
// machine-readable tag (used verbatim by the CLI error report).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& detail)
        : std::runtime_error(detail), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define JETPHASE_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& detail) : Error(#Name, detail) {}     \
    }

JETPHASE_DEFINE_ERROR(InputShapeError);
JETPHASE_DEFINE_ERROR(ParseError);
JETPHASE_DEFINE_ERROR(ConvergenceError);
JETPHASE_DEFINE_ERROR(NotNuRegularError);
JETPHASE_DEFINE_ERROR(PreconditionError);
JETPHASE_DEFINE_ERROR(NondegeneracyError);
JETPHASE_DEFINE_ERROR(SingularJacobianError);
JETPHASE_DEFINE_ERROR(DegenerateCriticalPointError);
JETPHASE_DEFINE_ERROR(NotCriticalError);
JETPHASE_DEFINE_ERROR(SplitOrderingError);
JETPHASE_DEFINE_ERROR(ArithmeticError);

#undef JETPHASE_DEFINE_ERROR

} // namespace jetphase
