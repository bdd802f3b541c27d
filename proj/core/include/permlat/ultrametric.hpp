#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "permlat/error.hpp"
#include "permlat/lattice.hpp"

namespace permlat {

using PointId = std::int64_t;
using LatticeRef = std::shared_ptr<const FiniteLattice>;

inline LatticeRef share(FiniteLattice lattice) {
  return std::make_shared<const FiniteLattice>(std::move(lattice));
}

/// Finite point set with a lattice-valued distance. Points are addressed by
/// position (0..size-1) in the accessors; ids are only labels.
class LambdaSpace {
 public:
  LambdaSpace() = default;
  explicit LambdaSpace(LatticeRef lattice);
  /// `distances` is row-major size*size. Throws Error(kInvalidSpace) on a
  /// shape mismatch or repeated id; metric axioms are left to validate_space().
  LambdaSpace(LatticeRef lattice, std::vector<PointId> points, std::vector<Elem> distances);

  const FiniteLattice& lattice() const { return *lattice_; }
  const LatticeRef& lattice_ref() const { return lattice_; }

  std::size_t size() const { return points_.size(); }
  const std::vector<PointId>& points() const { return points_; }
  PointId point(std::size_t i) const { return points_[i]; }
  std::optional<std::size_t> index_of(PointId id) const;

  Elem d(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
  /// Distance by id; throws Error(kInvalidSpace) for unknown ids.
  Elem distance(PointId x, PointId y) const;
  const std::vector<Elem>& distances() const { return dist_; }

  /// Appends a point; `to_existing[i]` is its distance to point i.
  void add_point(PointId id, std::span<const Elem> to_existing);
  void set(std::size_t i, std::size_t j, Elem value);

  /// Subspace on the listed positions, in list order.
  LambdaSpace induced(std::span<const std::size_t> positions) const;

  bool operator==(const LambdaSpace& other) const;

 private:
  LatticeRef lattice_;
  std::vector<PointId> points_;
  std::vector<Elem> dist_;
  std::unordered_map<PointId, std::size_t> index_;
};

/// Identity of indiscernibles, symmetry, zero diagonal and the join-triangle
/// inequality d(x,z) <= d(x,y) v d(y,z); each violation carries point ids.
ValidationReport validate_space(const LambdaSpace& space);

/// classes[λ][i] is the class label of point i in E_λ; labels are numbered
/// by first occurrence.
struct EquivalenceSystem {
  LatticeRef lattice;
  std::vector<PointId> points;
  std::vector<std::vector<int>> classes;

  bool same_class(Elem lambda, std::size_t i, std::size_t j) const {
    return classes[lambda][i] == classes[lambda][j];
  }
  bool operator==(const EquivalenceSystem& other) const {
    return *lattice == *other.lattice && points == other.points && classes == other.classes;
  }
};

/// Relabels a partition by first occurrence so equal partitions compare equal.
std::vector<int> normalize_partition(std::span<const int> labels);

/// Monotonicity, E_0 discrete, E_1 trivial and E_{a∧b} = E_a ∩ E_b.
ValidationReport validate_equivalence_system(const EquivalenceSystem& system);

/// Class label per point of E_λ, numbered by first occurrence.
std::vector<int> class_labels(const LambdaSpace& space, Elem lambda);

/// E_λ = {(x,y) | d(x,y) <= λ}.
EquivalenceSystem equivalences_from_space(const LambdaSpace& space);

/// d(x,y) = meet of {λ | x E_λ y}.
LambdaSpace space_from_equivalences(const EquivalenceSystem& system);

/// Calls `visit` with every distance vector from a new point to the points of
/// `space` (all values nonzero) that keeps the join-triangle inequality.
/// Returning false from `visit` stops the enumeration.
void for_each_extension(const LambdaSpace& space, const std::function<bool(std::span<const Elem>)>& visit);

/// Every valid space on points 0..n-1 (labelled, not up to isomorphism).
void for_each_space(const LatticeRef& lattice, std::size_t n,
                    const std::function<bool(const LambdaSpace&)>& visit);

struct AmalgamResult {
  LambdaSpace space;
  /// (f2 id, f1 id) pairs forced to coincide; empty whenever the lattice's
  /// bottom is meet-irreducible.
  std::vector<std::pair<PointId, PointId>> identified;
};

/// Amalgam of f1 and f2 over the common subspace `base`, with cross
/// distances d(a,b) = meet over c in base of d(a,c) v d(c,b) (top when the
/// base is empty). This is the greatest valid completion. Output points are
/// f1's in order followed by the remaining new points of f2.
/// Errors: kNonDistributive, kInvalidFactor, kInvalidEmbedding (base point
/// missing from a factor or distances disagree), kPointIdCollision.
AmalgamResult canonical_amalgam(const LambdaSpace& base, const LambdaSpace& f1, const LambdaSpace& f2);

struct AmalgamationFailure {
  LambdaSpace base;
  LambdaSpace f1;
  LambdaSpace f2;
};

inline constexpr std::size_t kProbeMaxBase = 3;
inline constexpr std::size_t kProbeMaxNew = 2;

/// Searches instances with |base| <= 3 and <= 2 new points per factor, by
/// increasing base size then new-point counts, for one admitting no
/// completion of the cross distances at all (even allowing cross points to
/// coincide). Returns nullopt when the whole instance space amalgamates.
std::optional<AmalgamationFailure> amalgamation_failure_probe(const LatticeRef& lattice);

/// True when some assignment of cross distances (0 allowed) between the new
/// points of f1 and f2 satisfies the join-triangle inequality everywhere.
bool has_pseudo_completion(const LambdaSpace& base, const LambdaSpace& f1, const LambdaSpace& f2);

}  // namespace permlat
