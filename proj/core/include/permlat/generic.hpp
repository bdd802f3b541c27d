#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "permlat/random.hpp"
#include "permlat/sqorder.hpp"

namespace permlat {

/// The (bottom, top) pair of one subquotient order in a signature.
struct OrderSpec {
  Elem bottom = 0;
  Elem top = 0;
  bool operator==(const OrderSpec&) const = default;
};

/// Complete quantifier-free type of one new point x over a set A of points.
/// gaps[i] is present exactly when x lies in a new bottom class of order i
/// but in a top class that meets A; it counts the bottom classes of A in that
/// top class that lie below x.
struct OnePointType {
  std::vector<std::size_t> over;
  std::vector<Elem> distances;
  std::vector<std::optional<int>> gaps;

  bool operator==(const OnePointType&) const = default;
  auto operator<=>(const OnePointType&) const = default;
};

/// Every consistent type over the positions `over` (increasing): distance
/// vectors keeping the join-triangle inequality, crossed with every gap
/// choice. The order is deterministic.
std::vector<OnePointType> enumerate_one_point_types(const OrderedLambdaStructure& s,
                                                    std::span<const std::size_t> over);

/// Type of the existing point p over `over` (p not in `over`).
OnePointType type_of(const OrderedLambdaStructure& s, std::size_t p, std::span<const std::size_t> over);

struct Realization {
  std::size_t position = 0;
  /// False when the type forced the new point onto an existing one.
  bool fresh = true;
};

/// Adds a point of type t: distances to points outside t.over come from the
/// canonical amalgam over t.over; each new bottom class is inserted uniformly
/// among the slots its gap allows. Throws kMeetReducibleBottom, kInvalidType.
Realization realize_type(OrderedLambdaStructure& s, const OnePointType& t, PointId id, SeededStream& rng);

struct GenerationConfig {
  std::uint64_t seed = 0;
  std::size_t target_size = 40;
  std::size_t saturation_depth = 2;
};

struct UnrealizedType {
  std::vector<std::size_t> over;
  OnePointType type;
};

struct ExtensionReport {
  std::size_t k = 0;
  std::size_t subsets = 0;
  std::size_t types = 0;
  std::size_t realized = 0;
  /// Unrealized (subset, type) pairs in enumeration order, capped at
  /// kMaxListedFailures entries; `types - realized` is the full count.
  std::vector<UnrealizedType> missing;

  double ratio() const { return types == 0 ? 1.0 : static_cast<double>(realized) / static_cast<double>(types); }
  bool satisfied() const { return realized == types; }
};

inline constexpr std::size_t kMaxListedFailures = 50;

/// For every subset of size <= k and every consistent type over it, whether
/// some point of s outside the subset realizes it.
ExtensionReport extension_property_check(const OrderedLambdaStructure& s, std::size_t k);

struct HomogeneityFailure {
  std::vector<std::size_t> from;
  std::vector<std::size_t> to;
  /// A point realizing over `from` a relation pattern nothing realizes over `to`.
  std::size_t witness = 0;
};

struct HomogeneityReport {
  std::size_t m = 0;
  std::size_t tuples = 0;
  std::size_t failures = 0;
  std::vector<HomogeneityFailure> examples;

  bool ok() const { return failures == 0; }
};

/// For ordered tuples of size <= m with the same isomorphism type, whether
/// each one-point extension of one has a counterpart over the other. Counts
/// one failure per (tuple, missing extension pattern).
HomogeneityReport homogeneity_check(const OrderedLambdaStructure& s, std::size_t m);

struct GenerationResult {
  OrderedLambdaStructure structure;
  std::vector<std::string> warnings;
  /// Points added after every type over every subset of size <= k was
  /// already realized.
  std::size_t fallback_steps = 0;
  ExtensionReport saturation;
};

/// Grows a structure from nothing by realizing unrealized types, scheduling
/// subset sizes 0..k round-robin and, within a size, subsets and types in
/// lexicographic order from a moving cursor. A pure function of its inputs.
/// Throws kNonDistributive, kMeetReducibleBottom, kInvalidSignature.
GenerationResult generate_generic(const LatticeRef& lattice, std::span<const OrderSpec> signature,
                                  const GenerationConfig& config);

/// One order per meet-irreducible E of the lattice, from E to its cover.
std::vector<OrderSpec> catalog_signature(const FiniteLattice& lattice);

struct RelationReport {
  /// Pairs of lattice elements whose relations coincide on the sample.
  std::vector<std::pair<Elem, Elem>> coinciding;
  /// E_{a∧b} differs from E_a ∩ E_b.
  std::vector<std::pair<Elem, Elem>> meet_mismatch;
  /// (a, b, point): inside the (a∨b)-class of the point, its a-class misses
  /// some b-class.
  std::vector<std::tuple<Elem, Elem, std::size_t>> not_cross_cutting;
};

/// Checks that the relations E_λ are pairwise distinct, meet-preserving and
/// cross-cutting for incomparable pairs.
RelationReport relation_check(const LambdaSpace& space);

}  // namespace permlat
