#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace permlat {

enum class ErrorCode {
  kInvalidLattice,
  kNonDistributive,
  kSizeCapExceeded,
  kInvalidSpace,
  kInvalidFactor,
  kInvalidEmbedding,
  kPointIdCollision,
  kUndefinedRestriction,
  kTopBottomMismatch,
  kNotConvex,
  kInvalidOrder,
  kMeetReducibleBottom,
  kInvalidSignature,
  kInvalidType,
  kMissingMeetIrreducible,
  kPrecondition,
  kParse,
  kIo,
};

// Stable upper-case names used in reports and CLI output.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// One invariant violation with the elements (or points) that witness it.
struct Violation {
  std::string kind;
  std::vector<std::string> witness;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view kind) const;
  void add(std::string kind, std::vector<std::string> witness, std::string detail = {});
};

}  // namespace permlat
