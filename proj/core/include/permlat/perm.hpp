#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "permlat/generic.hpp"

namespace permlat {

/// n linear orders on the points 0..N-1; orders[i][p] is the rank of p in
/// the i-th order.
struct PermStructure {
  std::vector<std::vector<int>> orders;

  std::size_t dimension() const { return orders.size(); }
  std::size_t size() const { return orders.empty() ? 0 : orders.front().size(); }
  bool less(std::size_t order, std::size_t x, std::size_t y) const { return orders[order][x] < orders[order][y]; }

  bool operator==(const PermStructure&) const = default;
};

/// Every order must be a permutation of 0..N-1 of the same length.
ValidationReport validate_perm(const PermStructure& p);

inline constexpr std::size_t kMaxPermDimension = 16;

/// Bit i is set iff x <_i y.
using Orientation = std::uint32_t;

Orientation orientation(const PermStructure& p, std::size_t x, std::size_t y);

/// Orientation of the reversed pair.
inline Orientation negate(Orientation v, std::size_t n) { return ~v & ((Orientation{1} << n) - 1); }

/// Relation on distinct points given as a sorted list of orientations.
using OrientationSet = std::vector<Orientation>;

/// x R y for distinct x, y, read through the orientation of (x, y).
std::vector<bool> relation_from_types(const PermStructure& p, const OrientationSet& types);

enum class OrderRole { kBase, kCompanion, kStandalone };

struct EmittedOrder {
  OrderRole role = OrderRole::kBase;
  /// Chain index for base and companion orders, source order for standalone.
  std::size_t owner = 0;
  /// Companion bit.
  std::size_t bit = 0;
};

struct Codebook {
  std::size_t dimension = 0;
  std::vector<EmittedOrder> emitted;
  /// relations[λ] defines E_λ on distinct points.
  std::vector<OrientationSet> relations;
  /// orders[i] defines x < y for the i-th source order.
  std::vector<OrientationSet> orders;
};

struct EncodeResult {
  PermStructure perm;
  Codebook codebook;
  ChainCover cover;
  /// |cover| + sum ceil(log2(|L|+1)) for the cover used.
  std::size_t bound = 0;
};

/// Chains of the meet-irreducibles other than bottom and top that minimise
/// the order count.
ChainCover optimal_cover(const FiniteLattice& lattice);

/// Throws kPrecondition unless `cover` lists chains of meet-irreducibles
/// other than bottom and top, each bottom to top, covering all of them.
void check_cover(const FiniteLattice& lattice, const ChainCover& cover);

/// Linear orders interdefinable with s. Per chain L of the cover: one base
/// order built by compose_lex along a maximal lattice chain through L, each
/// cover step filled by a restriction of a source order, and
/// ceil(log2(|L|+1)) companions that reverse the steps at level i when bit j
/// of i is set. Source orders not reproduced by a base order get their own
/// linear order. Throws kMissingMeetIrreducible when a meet-irreducible below
/// top is the bottom of no source order.
EncodeResult encode_orders(const OrderedLambdaStructure& s, const std::optional<ChainCover>& cover = std::nullopt);

struct DecodedRelation {
  /// Orientation classes, each represented by the smaller of v and its
  /// negation.
  OrientationSet classes;
  std::size_t class_count = 0;
  /// Emitted orders in which every class is an interval.
  std::vector<std::size_t> convex_in;
};

struct DecodeReport {
  std::size_t sample_size = 0;
  std::size_t dimension = 0;
  /// Orientation classes occurring in the sample.
  std::size_t observed_classes = 0;
  /// Ordered by size then lexicographically; front is equality, back is all.
  std::vector<DecodedRelation> relations;
  FiniteLattice lattice;
  std::vector<std::pair<std::size_t, std::size_t>> hasse;
  bool distributive = true;
  /// Every join in the lattice is the transitive closure of the union.
  bool joins_are_closures = true;
};

/// The equivalence relations on the sample that are unions of orientation
/// classes, ordered by refinement. Transitivity is tested on the sample only.
DecodeReport decode_relations(const PermStructure& p);

inline constexpr std::size_t kMaxExhaustiveProfile = 4;

struct Profile {
  std::size_t k = 0;
  bool exhaustive = true;
  std::size_t tuples = 0;
  /// Type of an ordered k-tuple: per order, the relative ranks of the tuple.
  std::map<std::string, std::size_t> counts;

  std::set<std::string> support() const;
};

/// Types of ordered k-tuples of distinct points. Exhaustive for k <= 4;
/// above that `samples` tuples are drawn from a stream seeded by `seed`.
Profile profile(const PermStructure& p, std::size_t k, std::size_t samples = 20000, std::uint64_t seed = 0);

enum class SegmentRelation { kEqual, kReversed, kIndependent };

struct CameronInstance {
  /// Chain length of the lattice: 2 or 3.
  std::size_t chain = 2;
  /// How the second order treats each segment of the first.
  std::vector<SegmentRelation> segments;
  /// The decoded lattice is isomorphic to the chain.
  bool faithful = false;
  /// Index into CameronResult::profiles when faithful.
  std::optional<std::size_t> profile_class;
};

struct CameronResult {
  std::vector<CameronInstance> sweep;
  /// Distinct 3-point profile supports of faithful instances.
  std::vector<Profile> profiles;
};

/// Every 2-order presentation over the 2- and 3-chain with each segment of
/// the second order equal, reversed or independent relative to the first.
CameronResult cameron_enumeration(std::size_t sample_size, std::uint64_t seed = 0);

std::string to_string(SegmentRelation r);

}  // namespace permlat
