#include "tropmirror/errors.hpp"

namespace tropmirror {

const char* error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotReflexive: return "NotReflexive";
    case ErrorCode::FaceNotFound: return "FaceNotFound";
    case ErrorCode::NotContained: return "NotContained";
    case ErrorCode::NotInFan: return "NotInFan";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankUnsupported: return "RankUnsupported";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NotInTriangulation: return "NotInTriangulation";
    case ErrorCode::NotDualPair: return "NotDualPair";
    case ErrorCode::NotAtInfinity: return "NotAtInfinity";
    case ErrorCode::NotInJ: return "NotInJ";
    case ErrorCode::RayNotInFan: return "RayNotInFan";
    case ErrorCode::InvalidPhaseStructure: return "InvalidPhaseStructure";
    case ErrorCode::Unsolvable: return "Unsolvable";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::MembershipViolation: return "MembershipViolation";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::BoundarySquareNonzero: return "BoundarySquareNonzero";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::NotAClosedChain: return "NotAClosedChain";
    case ErrorCode::UnsupportedCell: return "UnsupportedCell";
    case ErrorCode::Internal: return "Internal";
    case ErrorCode::HypothesisFails: return "HypothesisFails";
    }
    return "Unknown";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::MembershipViolation:
    case ErrorCode::DegreeOverflow:
    case ErrorCode::Overflow:
    case ErrorCode::BoundarySquareNonzero:
    case ErrorCode::SupportViolation:
    case ErrorCode::NotAClosedChain:
    case ErrorCode::UnsupportedCell:
    case ErrorCode::Internal:
        return 2;
    case ErrorCode::HypothesisFails:
        return 3;
    default:
        return 1;
    }
}

}  // namespace tropmirror
