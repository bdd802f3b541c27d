#include <algorithm>
#include <map>
#include <functional>

#include "doctest.h"
#include "oracles.hpp"
#include "permlat/lattice.hpp"
#include "permlat/random.hpp"

using namespace permlat;

namespace {

FiniteLattice b2() { return make_boolean(2); }
FiniteLattice b2_plus_point() { return ordinal_sum(make_boolean(2), make_chain(2)); }

// Random poset on n elements: each forward pair related with probability 1/3,
// then closed transitively.
FinitePoset random_poset(SeededStream& rng, std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::pair<Elem, Elem>> covers;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("p" + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.below(3) == 0) covers.emplace_back(static_cast<Elem>(i), static_cast<Elem>(j));
    }
  }
  return FinitePoset::from_covers(names, covers);
}

// Minimum of the bound formula over every partition of the core into chains.
int brute_force_upper(const FinitePoset& core) {
  const std::size_t m = core.size();
  int best = 1 << 30;
  std::vector<int> block(m, 0);
  // Restricted growth strings enumerate set partitions.
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int blocks) {
    if (i == m) {
      int cost = blocks;
      for (int b = 0; b < blocks; ++b) {
        std::vector<Elem> members;
        for (std::size_t x = 0; x < m; ++x) {
          if (block[x] == b) members.push_back(static_cast<Elem>(x));
        }
        for (std::size_t u = 0; u < members.size(); ++u) {
          for (std::size_t v = u + 1; v < members.size(); ++v) {
            if (!core.comparable(members[u], members[v])) return;
          }
        }
        cost += ceil_log2(members.size() + 1);
      }
      best = std::min(best, cost);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      block[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("validate_lattice accepts the 2-chain and M3") {
  CHECK(validate_lattice(make_chain(2)).ok());
  CHECK(validate_lattice(make_m3()).ok());
  CHECK(validate_lattice(make_n5()).ok());
}

TEST_CASE("validate_lattice reports a missing upper bound with its witness") {
  const std::vector<std::pair<Elem, Elem>> covers{{0, 1}, {0, 2}};
  const FinitePoset vee = FinitePoset::from_covers({"0", "a", "b"}, covers);
  const ValidationReport report = validate_lattice(vee);
  REQUIRE(report.has("missing_upper_bound"));
  const auto it = std::find_if(report.violations.begin(), report.violations.end(),
                               [](const Violation& v) { return v.kind == "missing_upper_bound"; });
  CHECK(it->witness == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(FiniteLattice::from_poset(vee), Error);
}

TEST_CASE("validate_lattice catches corrupted tables") {
  const FiniteLattice good = b2();
  const std::size_t n = good.size();
  std::vector<Elem> meet(n * n);
  std::vector<Elem> join(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      meet[a * n + b] = good.meet(a, b);
      join[a * n + b] = good.join(a, b);
    }
  }
  const Elem a = *good.find("a");
  const Elem b = *good.find("b");
  meet[a * n + b] = a;
  const FiniteLattice bad = FiniteLattice::from_tables(good.poset(), meet, join, good.bottom(), good.top());
  CHECK(validate_lattice(bad).has("meet_not_glb"));
}

TEST_CASE("validate_poset reports a non-transitive relation") {
  std::vector<ElemMask> up{0b011, 0b110, 0b100};
  const FinitePoset p = FinitePoset::from_up_sets({"x", "y", "z"}, up);
  const ValidationReport report = validate_poset(p);
  REQUIRE(report.has("not_transitive"));
  CHECK(report.violations.front().witness == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("is_distributive rejects M3 and N5 with five-element witnesses") {
  const auto m3 = is_distributive(make_m3());
  REQUIRE_FALSE(m3.distributive);
  CHECK(m3.witness->kind == ForbiddenSublattice::kM3);
  CHECK(m3.witness->elements == std::array<Elem, 5>{0, 1, 2, 3, 4});

  const auto n5 = is_distributive(make_n5());
  REQUIRE_FALSE(n5.distributive);
  CHECK(n5.witness->kind == ForbiddenSublattice::kN5);

  CHECK(is_distributive(b2()).distributive);
  CHECK(is_distributive(product(make_chain(3), make_chain(3))).distributive);
}

TEST_CASE("is_distributive agrees with the distributive law on all lattices up to 7 elements") {
  const auto lattices = enumerate_lattices(7);
  for (const auto& lat : lattices) {
    const auto result = is_distributive(lat);
    CHECK(result.distributive == oracle::distributive_by_law(lat));
    CHECK(result.witness.has_value() == !result.distributive);
  }
}

TEST_CASE("lattice enumeration matches the brute-force relation count") {
  std::map<std::size_t, std::size_t> by_size;
  std::map<std::size_t, std::size_t> distributive_by_size;
  for (const auto& lat : enumerate_lattices(6)) {
    ++by_size[lat.size()];
    if (oracle::distributive_by_law(lat)) ++distributive_by_size[lat.size()];
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto counts = oracle::count_lattices(n);
    CHECK(by_size[n] == counts.lattices);
    CHECK(distributive_by_size[n] == counts.distributive);
  }
  // Frozen from the oracle above.
  CHECK(by_size[4] == 2);
  CHECK(by_size[5] == 5);
  CHECK(by_size[6] == 15);
}

TEST_CASE("meet_irreducibles") {
  const FiniteLattice chain3 = make_chain(3);
  const auto mi = meet_irreducibles(chain3);
  CHECK(mi.elements == std::vector<Elem>{0, 1});
  CHECK(mi.cover[0] == Elem{1});
  CHECK(mi.cover[1] == Elem{2});

  const FiniteLattice boolean = b2();
  std::vector<std::string> names;
  for (Elem e : meet_irreducibles(boolean).elements) names.push_back(boolean.name(e));
  CHECK(names == std::vector<std::string>{"a", "b"});

  const FiniteLattice m3 = make_m3();
  names.clear();
  for (Elem e : meet_irreducibles(m3).elements) names.push_back(m3.name(e));
  CHECK(names == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("every element is the meet of the meet-irreducibles above it") {
  for (const auto& lat : enumerate_lattices(7)) {
    const auto mi = meet_irreducibles(lat);
    for (Elem x : mi.elements) CHECK(lat.poset().upper_covers(x).size() == 1);
    for (std::size_t x = 0; x < lat.size(); ++x) {
      ElemMask above = 0;
      for (Elem m : mi.elements) {
        if (lat.leq(x, m)) above |= ElemMask{1} << m;
      }
      CHECK(lat.meet_all(above) == x);
    }
  }
}

TEST_CASE("min_chain_cover on small shapes") {
  const std::vector<std::pair<Elem, Elem>> none;
  CHECK(min_chain_cover(FinitePoset::from_covers({"x", "y", "z"}, none)).chains.size() == 3);
  CHECK(min_chain_cover(make_chain(5).poset()).chains.size() == 1);
  const IrreducibleCore core = irreducible_core(b2_plus_point());
  CHECK(core.poset.size() == 3);
  CHECK(min_chain_cover(core.poset).chains.size() == 2);
  CHECK(oracle::max_antichain(core.poset) == 2);
}

TEST_CASE("min_chain_cover size equals the largest antichain on random posets") {
  SeededStream rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const FinitePoset p = random_poset(rng, 1 + rng.below(10));
    const ChainCover cover = min_chain_cover(p);
    CHECK(cover.chains.size() == oracle::max_antichain(p));
    ElemMask covered = 0;
    for (const auto& chain : cover.chains) {
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) CHECK(p.lt(chain[i], chain[i + 1]));
      for (Elem e : chain) covered |= ElemMask{1} << e;
    }
    CHECK(covered == p.all());
  }
}

TEST_CASE("dimension_bounds on the worked shapes") {
  const DimensionBounds two = dimension_bounds(make_chain(2));
  CHECK(two.lower == 0);
  CHECK(two.upper == 0);
  CHECK_FALSE(two.note.empty());

  const DimensionBounds three = dimension_bounds(make_chain(3));
  CHECK(three.lower == 2);
  CHECK(three.upper == 2);

  const DimensionBounds bp = dimension_bounds(b2_plus_point());
  CHECK(bp.width == 2);
  CHECK(bp.lower == 4);
  CHECK(bp.upper == 5);
  CHECK(bp.exhaustive);

  CHECK_THROWS_AS(dimension_bounds(make_m3()), Error);
}

TEST_CASE("dimension_bounds upper is the true minimum over chain partitions") {
  for (const auto& lat : enumerate_distributive_lattices(8)) {
    const DimensionBounds b = dimension_bounds(lat);
    const IrreducibleCore core = irreducible_core(lat);
    if (core.to_lattice.empty()) continue;
    CHECK(b.lower % 2 == 0);
    CHECK(b.lower <= b.upper);
    CHECK(b.upper == brute_force_upper(core.poset));
    CHECK(cover_cost(b.cover) == b.upper);
  }
}

TEST_CASE("enumerate_distributive_lattices") {
  const auto two = enumerate_distributive_lattices(2);
  REQUIRE(two.size() == 1);
  CHECK(isomorphic(two[0], make_chain(2)));

  const auto four = enumerate_distributive_lattices(4);
  REQUIRE(four.size() == 4);
  for (const auto& expected : {make_chain(2), make_chain(3), make_chain(4), b2()}) {
    CHECK(std::any_of(four.begin(), four.end(), [&](const FiniteLattice& l) { return isomorphic(l, expected); }));
  }

  const auto five = enumerate_distributive_lattices(5);
  REQUIRE(five.size() == 7);
  for (const auto& expected : {make_chain(5), b2_plus_point(), ordinal_sum(make_chain(2), b2())}) {
    CHECK(std::any_of(five.begin(), five.end(), [&](const FiniteLattice& l) { return isomorphic(l, expected); }));
  }

  std::map<std::size_t, std::size_t> by_size;
  for (const auto& lat : enumerate_distributive_lattices(8)) {
    CHECK(oracle::distributive_by_law(lat));
    ++by_size[lat.size()];
  }
  for (std::size_t n = 2; n <= 7; ++n) CHECK(by_size[n] == oracle::count_lattices(n).distributive);
  CHECK(by_size[8] == 15);

  CHECK_THROWS_AS(enumerate_distributive_lattices(9), Error);
}

TEST_CASE("canonical form is invariant under relabeling") {
  const FiniteLattice n5 = make_n5();
  // Same shape with a different id order: 0 < b < 1, 0 < a < c < 1 written backwards.
  const std::vector<std::pair<Elem, Elem>> covers{{4, 2}, {2, 0}, {4, 3}, {3, 1}, {1, 0}};
  const FinitePoset shuffled = FinitePoset::from_covers({"1", "c", "b", "a", "0"}, covers);
  CHECK(isomorphic(n5.poset(), shuffled));
  CHECK_FALSE(isomorphic(make_m3(), make_n5()));
  CHECK_FALSE(isomorphic(b2_plus_point(), ordinal_sum(make_chain(2), b2())));
}

TEST_CASE("constructors") {
  CHECK(make_boolean(3).size() == 8);
  CHECK(product(make_chain(2), make_chain(3)).size() == 6);
  const FiniteLattice bp = b2_plus_point();
  CHECK(bp.size() == 5);
  CHECK(bp.name(bp.bottom()) == "0");
  CHECK(bp.name(bp.top()) == "1");
}
