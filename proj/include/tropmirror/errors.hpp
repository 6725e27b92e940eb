#pragma once

#include <stdexcept>
#include <string>

namespace tropmirror {

enum class ErrorCode {
    // input validation (CLI exit 1)
    NotReflexive,
    FaceNotFound,
    NotContained,
    NotInFan,
    DimensionMismatch,
    RankUnsupported,
    RankMismatch,
    NotInTriangulation,
    NotDualPair,
    NotAtInfinity,
    NotInJ,
    RayNotInFan,
    InvalidPhaseStructure,
    Unsolvable,
    InvalidInput,
    // internal consistency (CLI exit 2)
    MembershipViolation,
    DegreeOverflow,
    Overflow,
    BoundarySquareNonzero,
    SupportViolation,
    NotAClosedChain,
    UnsupportedCell,
    Internal,
    // hypothesis failure (CLI exit 3)
    HypothesisFails,
};

const char* error_name(ErrorCode code);

/// Exit status the CLI reports for an error of this kind.
int exit_code_for(ErrorCode code);

class TropError : public std::runtime_error {
public:
    TropError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw TropError(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace tropmirror
