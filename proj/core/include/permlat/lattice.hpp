#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permlat/error.hpp"

namespace permlat {

/// Index of a poset or lattice element.
using Elem = std::uint8_t;
/// Set of elements as a bitmask; bit i stands for element i.
using ElemMask = std::uint64_t;

inline constexpr std::size_t kMaxLatticeSize = 64;

/// A finite partial order stored as up-set and down-set bitmasks per element.
/// Construction does not validate; use validate_poset() on untrusted input.
class FinitePoset {
 public:
  FinitePoset() = default;

  /// up[a] must contain b iff a <= b.
  static FinitePoset from_up_sets(std::vector<std::string> names, std::vector<ElemMask> up);

  /// Reflexive-transitive closure of the given covering pairs (lower, upper).
  static FinitePoset from_covers(std::vector<std::string> names,
                                 std::span<const std::pair<Elem, Elem>> covers);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Elem a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Elem> find(std::string_view name) const;

  bool leq(Elem a, Elem b) const { return (up_[a] >> b) & 1U; }
  bool lt(Elem a, Elem b) const { return a != b && leq(a, b); }
  bool comparable(Elem a, Elem b) const { return leq(a, b) || leq(b, a); }

  ElemMask up_set(Elem a) const { return up_[a]; }
  ElemMask down_set(Elem a) const { return down_[a]; }
  ElemMask all() const;

  std::vector<Elem> upper_covers(Elem a) const;
  std::vector<Elem> lower_covers(Elem a) const;
  std::vector<std::pair<Elem, Elem>> hasse_edges() const;

  /// Subposet on the listed elements, renumbered in list order.
  FinitePoset induced(std::span<const Elem> elements) const;

  bool operator==(const FinitePoset& other) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<ElemMask> up_;
  std::vector<ElemMask> down_;
};

/// Reflexivity, antisymmetry and transitivity, each violation with a witness.
ValidationReport validate_poset(const FinitePoset& poset);

/// A poset is a lattice candidate; this reports order-axiom violations and
/// every pair lacking a least upper or greatest lower bound.
ValidationReport validate_lattice(const FinitePoset& candidate);

class FiniteLattice {
 public:
  FiniteLattice() = default;

  /// Computes meet/join tables. Throws Error(kInvalidLattice) with the
  /// first validation finding when the poset is not a lattice.
  static FiniteLattice from_poset(FinitePoset poset);

  /// Unchecked: used to exercise validate_lattice() on hand-built tables.
  static FiniteLattice from_tables(FinitePoset poset, std::vector<Elem> meet,
                                   std::vector<Elem> join, Elem bottom, Elem top);

  const FinitePoset& poset() const { return poset_; }
  std::size_t size() const { return poset_.size(); }
  const std::string& name(Elem a) const { return poset_.name(a); }
  std::optional<Elem> find(std::string_view name) const { return poset_.find(name); }

  Elem meet(Elem a, Elem b) const { return meet_[a * size() + b]; }
  Elem join(Elem a, Elem b) const { return join_[a * size() + b]; }
  bool leq(Elem a, Elem b) const { return poset_.leq(a, b); }
  bool lt(Elem a, Elem b) const { return poset_.lt(a, b); }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }

  /// Meet of a set of elements; the empty meet is top.
  Elem meet_all(ElemMask elements) const;
  Elem join_all(ElemMask elements) const;

  bool operator==(const FiniteLattice& other) const = default;

 private:
  FinitePoset poset_;
  std::vector<Elem> meet_;
  std::vector<Elem> join_;
  Elem bottom_ = 0;
  Elem top_ = 0;
};

/// Checks the tables against the order: meet/join are greatest lower and
/// least upper bounds, bottom/top are extremal, and the algebraic laws hold.
ValidationReport validate_lattice(const FiniteLattice& lattice);

enum class ForbiddenSublattice { kM3, kN5 };

struct DistributivityWitness {
  ForbiddenSublattice kind;
  /// The five elements of the sublattice in increasing id order.
  std::array<Elem, 5> elements;
};

struct DistributivityResult {
  bool distributive = true;
  std::optional<DistributivityWitness> witness;
};

/// Searches 5-element subsets in lexicographic id order for a sublattice
/// isomorphic to M3 or N5. The first hit is the witness.
DistributivityResult is_distributive(const FiniteLattice& lattice);

bool is_meet_irreducible(const FiniteLattice& lattice, Elem x);

struct MeetIrreducibles {
  std::vector<Elem> elements;
  /// cover[x] is the unique upper cover of x for meet-irreducible x.
  std::vector<std::optional<Elem>> cover;
};

MeetIrreducibles meet_irreducibles(const FiniteLattice& lattice);

/// The meet-irreducibles other than bottom and top, as a poset, with the map
/// back to lattice elements.
struct IrreducibleCore {
  FinitePoset poset;
  std::vector<Elem> to_lattice;
};

IrreducibleCore irreducible_core(const FiniteLattice& lattice);

struct ChainCover {
  /// Each chain is listed bottom to top.
  std::vector<std::vector<Elem>> chains;
};

/// A minimum chain cover (Dilworth) via maximum bipartite matching.
ChainCover min_chain_cover(const FinitePoset& poset);

struct DimensionBounds {
  int lower = 0;
  int upper = 0;
  int width = 0;
  /// True when the upper bound was minimised over every chain partition.
  bool exhaustive = true;
  /// Cover attaining `upper`, in lattice element ids.
  ChainCover cover;
  std::string note;
};

/// Cost of a chain cover in the upper bound: |cover| + sum ceil(log2(|L|+1)).
int cover_cost(const ChainCover& cover);
int ceil_log2(std::size_t n);

inline constexpr std::size_t kExhaustiveCoverLimit = 12;

/// Throws Error(kNonDistributive) when the lattice is not distributive.
DimensionBounds dimension_bounds(const FiniteLattice& lattice);

/// Downset lattice of a poset, ordered by inclusion.
FiniteLattice downset_lattice(const FinitePoset& poset);

inline constexpr std::size_t kMaxEnumerationSize = 8;

/// One representative per isomorphism class of distributive lattices with
/// 2..max_size elements, built as downset lattices (Birkhoff). Throws
/// Error(kSizeCapExceeded) above kMaxEnumerationSize.
std::vector<FiniteLattice> enumerate_distributive_lattices(std::size_t max_size);

/// Every lattice with 2..max_size elements up to isomorphism (max_size <= 8).
std::vector<FiniteLattice> enumerate_lattices(std::size_t max_size);

/// Canonical adjacency form: equal iff the posets are isomorphic.
std::vector<ElemMask> canonical_form(const FinitePoset& poset);
bool isomorphic(const FinitePoset& a, const FinitePoset& b);
inline bool isomorphic(const FiniteLattice& a, const FiniteLattice& b) {
  return isomorphic(a.poset(), b.poset());
}

// Small named lattices.
FiniteLattice make_chain(std::size_t n);
FiniteLattice make_boolean(std::size_t atoms);
FiniteLattice make_m3();
FiniteLattice make_n5();
/// a placed entirely below b, with a's top glued to b's bottom.
FiniteLattice ordinal_sum(const FiniteLattice& a, const FiniteLattice& b);
FiniteLattice product(const FiniteLattice& a, const FiniteLattice& b);

}  // namespace permlat
