#include "permlat/error.hpp"

#include <algorithm>

namespace permlat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidLattice: return "INVALID_LATTICE";
    case ErrorCode::kNonDistributive: return "NON_DISTRIBUTIVE";
    case ErrorCode::kSizeCapExceeded: return "SIZE_CAP_EXCEEDED";
    case ErrorCode::kInvalidSpace: return "INVALID_SPACE";
    case ErrorCode::kInvalidFactor: return "INVALID_FACTOR";
    case ErrorCode::kInvalidEmbedding: return "INVALID_EMBEDDING";
    case ErrorCode::kPointIdCollision: return "POINT_ID_COLLISION";
    case ErrorCode::kUndefinedRestriction: return "UNDEFINED_RESTRICTION";
    case ErrorCode::kTopBottomMismatch: return "TOP_BOTTOM_MISMATCH";
    case ErrorCode::kNotConvex: return "NOT_CONVEX";
    case ErrorCode::kInvalidOrder: return "INVALID_ORDER";
    case ErrorCode::kMeetReducibleBottom: return "MEET_REDUCIBLE_BOTTOM";
    case ErrorCode::kInvalidSignature: return "INVALID_SIGNATURE";
    case ErrorCode::kInvalidType: return "INVALID_TYPE";
    case ErrorCode::kMissingMeetIrreducible: return "MISSING_MEET_IRREDUCIBLE";
    case ErrorCode::kPrecondition: return "PRECONDITION";
    case ErrorCode::kParse: return "PARSE_ERROR";
    case ErrorCode::kIo: return "IO_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool ValidationReport::has(std::string_view kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

void ValidationReport::add(std::string kind, std::vector<std::string> witness, std::string detail) {
  violations.push_back({std::move(kind), std::move(witness), std::move(detail)});
}

}  // namespace permlat
