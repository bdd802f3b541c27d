#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "permlat/error.hpp"
#include "permlat/ultrametric.hpp"

namespace permlat {

/// An order on the E-classes of a space (E = bottom) in which two classes
/// are comparable exactly when they share an F-class (F = top). Stored as one
/// rank per point position; ranks are constant on E-classes and dense
/// (0..k-1) inside each F-class. The space is passed to every operation.
class SubquotientOrder {
 public:
  SubquotientOrder() = default;
  SubquotientOrder(Elem bottom, Elem top, std::vector<int> ranks)
      : bottom_(bottom), top_(top), ranks_(std::move(ranks)) {}

  /// Renumbers `raw` densely within each top class, keeping relative order.
  static SubquotientOrder normalized(const LambdaSpace& space, Elem bottom, Elem top, std::span<const int> raw);

  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }
  const std::vector<int>& ranks() const { return ranks_; }
  int rank(std::size_t i) const { return ranks_[i]; }

  /// x < y: same top class, different bottom classes, lower rank.
  bool less(const LambdaSpace& space, std::size_t x, std::size_t y) const {
    const FiniteLattice& lat = space.lattice();
    const Elem dxy = space.d(x, y);
    return lat.leq(dxy, top_) && !lat.leq(dxy, bottom_) && ranks_[x] < ranks_[y];
  }

  /// Appends a rank for a newly added point.
  void push_rank(int rank) { ranks_.push_back(rank); }

  bool operator==(const SubquotientOrder& other) const = default;

 private:
  Elem bottom_ = 0;
  Elem top_ = 0;
  std::vector<int> ranks_;
};

/// bottom <= top, ranks constant on bottom classes and distinct between
/// bottom classes of one top class.
ValidationReport validate_sqorder(const LambdaSpace& space, const SubquotientOrder& order);

/// Checks an arbitrary strict relation (less[x*n+y]) against the definition
/// directly: strict partial order, invariant under the bottom relation, and
/// two bottom classes comparable iff they share a top class.
ValidationReport validate_order_relation(const LambdaSpace& space, Elem bottom, Elem top,
                                         const std::vector<bool>& less);

/// less[x*n+y] for the points of the space.
std::vector<bool> pullback(const LambdaSpace& space, const SubquotientOrder& order);

enum class RestrictionMode { kTopLowering, kCross };

struct Restriction {
  SubquotientOrder order;
  RestrictionMode mode;
};

/// Keeps the comparabilities of `order` inside g-classes. Defined when
/// g <= top; the result runs from bottom∧g to g. The mode is kTopLowering
/// when bottom <= g and kCross otherwise. Throws kUndefinedRestriction.
Restriction restrict_to(const LambdaSpace& space, const SubquotientOrder& order, Elem g);

/// Lexicographic composition: classes in one lo.top-class are ordered by lo,
/// others by hi. Throws kTopBottomMismatch unless lo.top == hi.bottom.
SubquotientOrder compose_lex(const LambdaSpace& space, const SubquotientOrder& lo, const SubquotientOrder& hi);

struct ConvexityResult {
  bool convex = true;
  /// Positions (x, z, y) with x < z < y, x and y g-related, z not.
  std::optional<std::array<std::size_t, 3>> witness;
};

/// Whether every g-class projects to a convex set of bottom classes; the
/// witness is the lexicographically smallest interleaving triple.
ConvexityResult convexity_check(const LambdaSpace& space, const SubquotientOrder& order, Elem g);

struct SplitResult {
  SubquotientOrder within;
  SubquotientOrder between;
};

/// Splits an e-convex order into its restriction to e and the order it
/// induces on e-classes. Throws kPrecondition unless bottom <= e <= top and
/// kNotConvex (with witness ids in the message) when e is not convex.
SplitResult split_convex_linear(const LambdaSpace& space, const SubquotientOrder& order, Elem e);

/// The same classes in the opposite order.
SubquotientOrder reversed(const LambdaSpace& space, const SubquotientOrder& order);

struct OrderedLambdaStructure {
  LambdaSpace space;
  std::vector<SubquotientOrder> orders;

  bool operator==(const OrderedLambdaStructure& other) const = default;
};

/// validate_space plus validate_sqorder for every order; violation kinds
/// from orders are prefixed with "order <i>: ".
ValidationReport validate_structure(const OrderedLambdaStructure& structure);

}  // namespace permlat
