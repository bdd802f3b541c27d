#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "permlat/generic.hpp"

using namespace permlat;

namespace {

OrderedLambdaStructure empty_structure(const LatticeRef& lat, std::vector<OrderSpec> sig) {
  OrderedLambdaStructure s;
  s.space = LambdaSpace(lat);
  for (const auto& o : sig) s.orders.emplace_back(o.bottom, o.top, std::vector<int>{});
  return s;
}

std::set<oracle::OneType> as_pairs(const std::vector<OnePointType>& types) {
  std::set<oracle::OneType> out;
  for (const auto& t : types) out.emplace(t.distances, t.gaps);
  return out;
}

std::vector<std::vector<std::size_t>> subsets_up_to(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t m = 0; m < (1U << n); ++m) {
    if (static_cast<std::size_t>(std::popcount(m)) > k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (m >> i & 1U) s.push_back(i);
    }
    out.push_back(s);
  }
  return out;
}

// Order-free space over the 3-chain: `sizes[i]` points in block i, distance
// E inside a block and 1 across.
OrderedLambdaStructure blocks(const std::vector<std::size_t>& sizes) {
  const LatticeRef lat = share(make_chain(3));
  const Elem e = *lat->find("a");
  std::vector<std::size_t> block;
  for (std::size_t b = 0; b < sizes.size(); ++b) block.insert(block.end(), sizes[b], b);
  const std::size_t n = block.size();
  std::vector<PointId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<Elem> d(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) d[x * n + y] = x == y ? lat->bottom() : block[x] == block[y] ? e : lat->top();
  }
  return {LambdaSpace(lat, ids, d), {}};
}

}  // namespace

TEST_CASE("one-point types over the empty set and over one point of a linear order") {
  const LatticeRef lat = share(make_chain(3));
  OrderedLambdaStructure s = empty_structure(lat, {{lat->bottom(), lat->top()}});
  CHECK(enumerate_one_point_types(s, {}).size() == 1);
  SeededStream rng(1);
  realize_type(s, enumerate_one_point_types(s, {}).front(), 0, rng);
  const std::vector<std::size_t> a{0};
  // Distance E or 1, and in either case above or below the point.
  const auto types = enumerate_one_point_types(s, a);
  CHECK(types.size() == 4);
  for (const auto& t : types) CHECK(t.gaps.front().has_value());
}

TEST_CASE("enumerated types are exactly the types of one-point extensions") {
  SeededStream rng(3);
  const std::vector<LatticeRef> lattices{share(make_chain(3)), share(make_boolean(2)),
                                         share(ordinal_sum(make_boolean(2), make_chain(2)))};
  for (const auto& lat : lattices) {
    const auto sig = catalog_signature(*lat);
    OrderedLambdaStructure s = empty_structure(lat, sig);
    for (int step = 0; step < 4; ++step) {
      std::vector<std::size_t> over;
      for (std::size_t i = 0; i < s.space.size(); ++i) {
        if (rng.below(2) == 0) over.push_back(i);
      }
      const auto types = enumerate_one_point_types(s, over);
      realize_type(s, types[rng.below(types.size())], step, rng);
    }
    REQUIRE(validate_structure(s).ok());
    for (const auto& over : subsets_up_to(s.space.size(), 2)) {
      CHECK(as_pairs(enumerate_one_point_types(s, over)) == oracle::extension_types(s, over));
    }
  }
}

TEST_CASE("realize_type adds a point of exactly the requested type") {
  const LatticeRef lat = share(ordinal_sum(make_boolean(2), make_chain(2)));
  const auto sig = catalog_signature(*lat);
  SeededStream rng(21);
  OrderedLambdaStructure s = empty_structure(lat, sig);
  for (PointId id = 0; id < 25; ++id) {
    std::vector<std::size_t> over;
    for (std::size_t i = 0; i < s.space.size() && over.size() < 3; ++i) {
      if (rng.below(3) == 0) over.push_back(i);
    }
    const auto types = enumerate_one_point_types(s, over);
    const OnePointType t = types[rng.below(types.size())];
    const Realization r = realize_type(s, t, id, rng);
    REQUIRE(validate_structure(s).ok());
    if (r.fresh) {
      CHECK(r.position == s.space.size() - 1);
      CHECK(type_of(s, r.position, over) == t);
    } else {
      CHECK(type_of(s, r.position, over).distances == t.distances);
    }
  }
}

TEST_CASE("realize over the empty base and error cases") {
  const LatticeRef lat = share(make_chain(2));
  OrderedLambdaStructure s = empty_structure(lat, {{0, 1}});
  SeededStream rng(0);
  for (PointId id = 0; id < 3; ++id) realize_type(s, enumerate_one_point_types(s, {}).front(), id, rng);
  CHECK(s.space.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(s.space.d(i, j) == (i == j ? lat->bottom() : lat->top()));
  }
  OnePointType bad{{0}, {lat->bottom()}, {std::nullopt}};
  try {
    realize_type(s, bad, 9, rng);
    FAIL("expected INVALID_TYPE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidType);
  }
  OnePointType no_gap{{0}, {lat->top()}, {std::nullopt}};
  CHECK_THROWS_AS(realize_type(s, no_gap, 9, rng), Error);

  const LatticeRef b2 = share(make_boolean(2));
  OrderedLambdaStructure r = empty_structure(b2, {{b2->bottom(), *b2->find("a")}});
  try {
    realize_type(r, enumerate_one_point_types(r, {}).front(), 0, rng);
    FAIL("expected MEET_REDUCIBLE_BOTTOM");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMeetReducibleBottom);
  }
  const std::vector<OrderSpec> sig{{b2->bottom(), b2->top()}};
  try {
    generate_generic(b2, sig, {});
    FAIL("expected MEET_REDUCIBLE_BOTTOM");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMeetReducibleBottom);
  }
  const LatticeRef m3 = share(make_m3());
  try {
    generate_generic(m3, {}, {});
    FAIL("expected NON_DISTRIBUTIVE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonDistributive);
  }
}

TEST_CASE("generation is deterministic and valid") {
  const LatticeRef lat = share(make_chain(3));
  const auto sig = catalog_signature(*lat);
  REQUIRE(sig.size() == 2);
  const GenerationConfig cfg{7, 30, 2};
  const GenerationResult a = generate_generic(lat, sig, cfg);
  const GenerationResult b = generate_generic(lat, sig, cfg);
  CHECK(a.structure == b.structure);
  CHECK(a.structure.space.size() == 30);
  CHECK(validate_structure(a.structure).ok());

  // Slots between the base classes are drawn from the stream.
  const LatticeRef chain2 = share(make_chain(2));
  const std::vector<OrderSpec> two{{0, 1}, {0, 1}};
  CHECK_FALSE(generate_generic(chain2, two, {7, 20, 1}).structure == generate_generic(chain2, two, {8, 20, 1}).structure);

  const std::vector<OrderSpec> twice{{0, 1}, {0, 1}};
  CHECK(generate_generic(share(make_chain(2)), twice, {1, 5, 1}).warnings.size() == 1);
}

TEST_CASE("two generic orders on a set realize all four orientations") {
  const LatticeRef lat = share(make_chain(2));
  const std::vector<OrderSpec> sig{{0, 1}, {0, 1}};
  const GenerationResult g = generate_generic(lat, sig, {7, 40, 2});
  const auto& s = g.structure;
  std::set<std::pair<bool, bool>> seen;
  for (std::size_t x = 0; x < s.space.size(); ++x) {
    for (std::size_t y = 0; y < s.space.size(); ++y) {
      if (x != y) seen.emplace(s.orders[0].less(s.space, x, y), s.orders[1].less(s.space, x, y));
    }
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("extension property: trivial and undersized cases") {
  const LatticeRef lat = share(make_chain(3));
  const auto sig = catalog_signature(*lat);
  const GenerationResult g = generate_generic(lat, sig, {1, 3, 1});
  CHECK(extension_property_check(g.structure, 0).satisfied());
  const ExtensionReport r = extension_property_check(g.structure, 2);
  CHECK(r.ratio() < 1.0);
  CHECK_FALSE(r.missing.empty());
  CHECK(r.types - r.realized >= r.missing.size());
}

// A finite linear order has a least element, so the type "below a" over the
// least point a can never be realized inside the sample. Every missing type
// at k = 1 for a single linear order is of this boundary kind.
TEST_CASE("finite samples with an order never saturate at k = 1") {
  const LatticeRef lat = share(make_chain(2));
  const std::vector<OrderSpec> sig{{0, 1}};
  const GenerationResult g = generate_generic(lat, sig, {5, 40, 3});
  const auto& s = g.structure;
  const ExtensionReport r = extension_property_check(s, 1);
  CHECK_FALSE(r.satisfied());
  CHECK(r.types - r.realized == 2);
  const int max_rank = static_cast<int>(s.space.size()) - 1;
  for (const auto& m : r.missing) {
    REQUIRE(m.over.size() == 1);
    const int rank = s.orders[0].rank(m.over[0]);
    const int gap = *m.type.gaps[0];
    CHECK(((rank == 0 && gap == 0) || (rank == max_rank && gap == 1)));
  }
  CHECK_FALSE(homogeneity_check(s, 1).ok());
}

TEST_CASE("homogeneity on regular block spaces and a corrupted one") {
  const OrderedLambdaStructure regular = blocks({3, 3, 3});
  const HomogeneityReport ok = homogeneity_check(regular, 3);
  CHECK(ok.ok());
  CHECK(ok.tuples == 9 + 9 * 8 + 9 * 8 * 7);

  const OrderedLambdaStructure uneven = blocks({4, 3, 2});
  CHECK(homogeneity_check(uneven, 1).ok());
  // A pair inside the block of two has no third point in its block.
  const HomogeneityReport bad = homogeneity_check(uneven, 2);
  CHECK_FALSE(bad.ok());
  REQUIRE_FALSE(bad.examples.empty());
  const auto& f = bad.examples.front();
  // The witness relates to `from` in a way nothing relates to `to`.
  CHECK(f.from.size() == 2);
  CHECK(std::find(f.from.begin(), f.from.end(), f.witness) == f.from.end());
}

TEST_CASE("generic samples without orders are homogeneous and saturated") {
  const LatticeRef lat = share(make_chain(2));
  const GenerationResult g = generate_generic(lat, {}, {3, 12, 2});
  CHECK(g.saturation.satisfied());
  CHECK(homogeneity_check(g.structure, 3).ok());
  CHECK(g.fallback_steps > 0);
}

TEST_CASE("relations of generated samples and of a grid") {
  const LatticeRef lat = share(make_boolean(2));
  const GenerationResult g = generate_generic(lat, catalog_signature(*lat), {2, 40, 2});
  const RelationReport r = relation_check(g.structure.space);
  CHECK(r.coinciding.empty());
  CHECK(r.meet_mismatch.empty());

  // 3 x 3 grid: rows are a-classes, columns b-classes.
  std::vector<PointId> ids(9);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<Elem> d(81);
  const Elem a = *lat->find("a");
  const Elem b = *lat->find("b");
  for (int x = 0; x < 9; ++x) {
    for (int y = 0; y < 9; ++y) {
      d[x * 9 + y] = x == y ? lat->bottom() : x / 3 == y / 3 ? a : x % 3 == y % 3 ? b : lat->top();
    }
  }
  const RelationReport grid = relation_check(LambdaSpace(lat, ids, d));
  CHECK(grid.coinciding.empty());
  CHECK(grid.meet_mismatch.empty());
  CHECK(grid.not_cross_cutting.empty());

  // Two points at distance 1 with no third point: a and b coincide and
  // nothing crosses.
  OrderedLambdaStructure small = empty_structure(lat, {});
  SeededStream rng(0);
  realize_type(small, enumerate_one_point_types(small, {}).front(), 0, rng);
  realize_type(small, enumerate_one_point_types(small, {}).front(), 1, rng);
  const RelationReport sr = relation_check(small.space);
  CHECK_FALSE(sr.coinciding.empty());
  CHECK_FALSE(sr.not_cross_cutting.empty());
}

TEST_CASE("catalog signature") {
  const LatticeRef lat = share(make_chain(4));
  const auto sig = catalog_signature(*lat);
  REQUIRE(sig.size() == 3);
  for (const auto& o : sig) CHECK(lat->lt(o.bottom, o.top));
  CHECK(catalog_signature(make_boolean(2)).size() == 2);
}
