#pragma once

#include <stdexcept>
#include <string>

namespace commwit {

/// Domain error codes surfaced verbatim in CLI error reports.
enum class Err {
    NotAUnit,
    NoSuchRoot,
    NotInvertible,
    RingMismatch,
    InvalidArgument,
    ScalarModM,
    DeterminantMismatch,
    NotRegularSemisimple,
    EigenvalueMismatch,
    FieldTooSmall,
    HypothesisViolated,
    DerivativeNotSurjective,
    InconsistentCongruence,
    NoBasePairFound,
    BudgetExceeded,
    PreconditionUnverified,
    NotFound,
    NotCovered,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

} // namespace commwit
