#include <algorithm>
#include <functional>
#include <numeric>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "permlat/ultrametric.hpp"

using namespace permlat;

namespace {

LatticeRef b2() { return share(make_boolean(2)); }

Elem el(const LatticeRef& lat, std::string_view name) { return *lat->find(name); }

LambdaSpace space(const LatticeRef& lat, std::vector<PointId> ids,
                  std::vector<std::tuple<PointId, PointId, std::string>> entries) {
  const std::size_t n = ids.size();
  std::vector<Elem> d(n * n, lat->bottom());
  LambdaSpace tmp(lat, ids, d);
  for (const auto& [x, y, v] : entries) {
    const std::size_t i = *tmp.index_of(x);
    const std::size_t j = *tmp.index_of(y);
    tmp.set(i, j, el(lat, v));
  }
  return tmp;
}

// All set partitions of n points as normalized label vectors.
std::vector<std::vector<int>> partitions(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      labels[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

// Factor = base plus one point with the given distances to the base.
LambdaSpace extend(const LambdaSpace& s, PointId id, std::vector<Elem> to_existing) {
  LambdaSpace out = s;
  out.add_point(id, to_existing);
  return out;
}

}  // namespace

TEST_CASE("validate_space examples") {
  const LatticeRef lat = b2();
  CHECK(validate_space(space(lat, {1}, {})).ok());
  CHECK(validate_space(space(lat, {1, 2}, {})).has("zero_distance"));
  const LambdaSpace three = space(lat, {1, 2, 3}, {{1, 2, "a"}, {2, 3, "b"}, {1, 3, "1"}});
  CHECK(validate_space(three).ok());
  const LambdaSpace broken = space(lat, {1, 2, 3}, {{1, 2, "a"}, {2, 3, "a"}, {1, 3, "1"}});
  const ValidationReport report = validate_space(broken);
  REQUIRE(report.has("triangle"));
  CHECK(report.violations.front().witness == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("equivalences_from_space examples") {
  const LatticeRef lat = b2();
  const LambdaSpace three = space(lat, {1, 2, 3}, {{1, 2, "a"}, {2, 3, "b"}, {1, 3, "1"}});
  const EquivalenceSystem e = equivalences_from_space(three);
  CHECK(e.classes[lat->top()] == std::vector<int>{0, 0, 0});
  CHECK(e.classes[lat->bottom()] == std::vector<int>{0, 1, 2});
  CHECK(e.classes[el(lat, "a")] == std::vector<int>{0, 0, 1});
  CHECK(validate_equivalence_system(e).ok());
}

TEST_CASE("space_from_equivalences examples") {
  const LatticeRef two = share(make_chain(2));
  EquivalenceSystem e{two, {1, 2}, {{0, 1}, {0, 0}}};
  CHECK(space_from_equivalences(e).distance(1, 2) == two->top());

  const LatticeRef chain3 = share(make_chain(3));
  const Elem mid = 1;
  EquivalenceSystem blocks{chain3, {1, 2, 3}, {{0, 1, 2}, {0, 0, 1}, {0, 0, 0}}};
  REQUIRE(validate_equivalence_system(blocks).ok());
  const LambdaSpace s = space_from_equivalences(blocks);
  CHECK(s.distance(1, 2) == mid);
  CHECK(s.distance(1, 3) == chain3->top());
  CHECK(s.distance(2, 3) == chain3->top());
}

TEST_CASE("space enumeration matches brute force over all matrices") {
  for (const auto& lattice : enumerate_lattices(5)) {
    const LatticeRef lat = share(lattice);
    for (std::size_t n = 0; n <= 4; ++n) {
      std::size_t count = 0;
      for_each_space(lat, n, [&](const LambdaSpace& s) {
        CHECK(validate_space(s).ok());
        ++count;
        return true;
      });
      CHECK(count == oracle::all_spaces(lat, n).size());
    }
  }
}

TEST_CASE("round trip space -> system -> space on every small space") {
  std::size_t checked = 0;
  for (const auto& lattice : enumerate_lattices(5)) {
    const LatticeRef lat = share(lattice);
    for (std::size_t n = 1; n <= 4; ++n) {
      for (const LambdaSpace& s : oracle::all_spaces(lat, n)) {
        const EquivalenceSystem e = equivalences_from_space(s);
        CHECK(validate_equivalence_system(e).ok());
        CHECK(space_from_equivalences(e) == s);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("round trip system -> space -> system on every small system") {
  for (const auto& lattice : enumerate_lattices(5)) {
    const LatticeRef lat = share(lattice);
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto parts = partitions(n);
      // Bottom and top partitions are forced (discrete, trivial); try every
      // partition for the other elements.
      std::vector<std::size_t> choice(lat->size(), 0);
      choice[lat->top()] = 0;
      choice[lat->bottom()] = parts.size() - 1;
      std::vector<std::size_t> free;
      for (std::size_t lambda = 0; lambda < lat->size(); ++lambda) {
        if (lambda != lat->top() && lambda != lat->bottom()) free.push_back(lambda);
      }
      std::size_t valid = 0;
      while (true) {
        EquivalenceSystem e{lat, {}, {}};
        for (std::size_t i = 0; i < n; ++i) e.points.push_back(static_cast<PointId>(i));
        for (std::size_t lambda = 0; lambda < lat->size(); ++lambda) e.classes.push_back(parts[choice[lambda]]);
        if (validate_equivalence_system(e).ok()) {
          ++valid;
          const LambdaSpace s = space_from_equivalences(e);
          CHECK(validate_space(s).ok());
          CHECK(equivalences_from_space(s) == e);
        }
        std::size_t k = 0;
        while (k < free.size() && ++choice[free[k]] == parts.size()) choice[free[k++]] = 0;
        if (k == free.size()) break;
      }
      // The two categories have the same objects on n labelled points.
      CHECK(valid == oracle::all_spaces(lat, n).size());
    }
  }
}

TEST_CASE("canonical_amalgam over one base point is the join") {
  const LatticeRef lat = share(ordinal_sum(make_boolean(2), make_chain(2)));
  const LambdaSpace base = space(lat, {0}, {});
  for (std::size_t l1 = 0; l1 < lat->size(); ++l1) {
    for (std::size_t l2 = 0; l2 < lat->size(); ++l2) {
      if (l1 == lat->bottom() || l2 == lat->bottom()) continue;
      const LambdaSpace f1 = extend(base, 1, {static_cast<Elem>(l1)});
      const LambdaSpace f2 = extend(base, 2, {static_cast<Elem>(l2)});
      const AmalgamResult r = canonical_amalgam(base, f1, f2);
      CHECK(r.space.distance(1, 2) == lat->join(l1, l2));
      CHECK(validate_space(r.space).ok());
      // The brute-force completions are exactly the values below the join.
      const auto completions = oracle::all_completions(base, f1, f2);
      for (const auto& c : completions) CHECK(lat->leq(c[0], lat->join(l1, l2)));
    }
  }
}

TEST_CASE("canonical_amalgam with f1 equal to the base returns f2") {
  const LatticeRef lat = b2();
  const LambdaSpace base = space(lat, {0, 1}, {{0, 1, "a"}});
  const LambdaSpace f2 = extend(base, 5, {el(lat, "b"), el(lat, "1")});
  const AmalgamResult r = canonical_amalgam(base, base, f2);
  CHECK(r.space == f2);
  CHECK(r.identified.empty());
}

TEST_CASE("empty base puts new points at top") {
  const LatticeRef lat = b2();
  const LambdaSpace base(lat);
  const LambdaSpace f1 = space(lat, {1}, {});
  const LambdaSpace f2 = space(lat, {2, 3}, {{2, 3, "a"}});
  const AmalgamResult r = canonical_amalgam(base, f1, f2);
  CHECK(r.space.distance(1, 2) == lat->top());
  CHECK(r.space.distance(1, 3) == lat->top());
  CHECK(r.space.distance(2, 3) == el(lat, "a"));
}

TEST_CASE("canonical_amalgam is the greatest completion and monotone in the base") {
  for (const auto& lattice : enumerate_distributive_lattices(5)) {
    const LatticeRef lat = share(lattice);
    const bool bottom_irreducible = is_meet_irreducible(*lat, lat->bottom());
    for (std::size_t b = 0; b <= 2; ++b) {
      for (const LambdaSpace& base : oracle::all_spaces(lat, b)) {
        const PointId x = 10;
        const PointId y = 20;
        for_each_extension(base, [&](std::span<const Elem> e1) {
          const LambdaSpace f1 = extend(base, x, {e1.begin(), e1.end()});
          for_each_extension(base, [&](std::span<const Elem> e2) {
            const LambdaSpace f2 = extend(base, y, {e2.begin(), e2.end()});
            const AmalgamResult r = canonical_amalgam(base, f1, f2);
            CHECK(validate_space(r.space).ok());
            if (bottom_irreducible) CHECK(r.identified.empty());
            const Elem dxy = r.identified.empty() ? r.space.distance(x, y) : lat->bottom();
            const auto completions = oracle::all_completions(base, f1, f2);
            REQUIRE_FALSE(completions.empty());
            CHECK(std::find(completions.begin(), completions.end(), std::vector<Elem>{dxy}) != completions.end());
            for (const auto& c : completions) CHECK(lat->leq(c[0], dxy));
            // Dropping the last base point into f1 only can only raise d(x,y).
            if (b > 0) {
              std::vector<std::size_t> keep(b - 1);
              std::iota(keep.begin(), keep.end(), 0);
              const LambdaSpace smaller = base.induced(keep);
              std::vector<std::size_t> f2_keep(keep);
              f2_keep.push_back(b);
              const LambdaSpace f2_small = f2.induced(f2_keep);
              const AmalgamResult wider = canonical_amalgam(smaller, f1, f2_small);
              const Elem wide = wider.identified.empty() ? wider.space.distance(x, y) : lat->bottom();
              CHECK(lat->leq(dxy, wide));
            }
            return true;
          });
          return true;
        });
      }
    }
  }
}

TEST_CASE("forced identification over a meet-reducible bottom") {
  const LatticeRef lat = b2();
  const LambdaSpace base = space(lat, {0, 1}, {{0, 1, "1"}});
  const LambdaSpace f1 = extend(base, 2, {el(lat, "a"), el(lat, "b")});
  const LambdaSpace f2 = extend(base, 3, {el(lat, "a"), el(lat, "b")});
  const AmalgamResult r = canonical_amalgam(base, f1, f2);
  REQUIRE(r.identified.size() == 1);
  CHECK(r.identified[0] == std::pair<PointId, PointId>{3, 2});
  CHECK(r.space.size() == 3);
  CHECK(validate_space(r.space).ok());
  // Every completion identifies the two points.
  CHECK(oracle::all_completions(base, f1, f2) == std::vector<std::vector<Elem>>{{lat->bottom()}});
}

TEST_CASE("canonical_amalgam errors") {
  const LatticeRef lat = b2();
  const LambdaSpace base = space(lat, {0}, {});
  const LambdaSpace f1 = extend(base, 1, {el(lat, "a")});
  const LambdaSpace f2 = extend(base, 2, {el(lat, "b")});

  const auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code_of([&] { canonical_amalgam(base, f1, extend(base, 1, {el(lat, "b")})); }) ==
        ErrorCode::kPointIdCollision);
  CHECK(code_of([&] { canonical_amalgam(space(lat, {9}, {}), f1, f2); }) == ErrorCode::kInvalidEmbedding);
  const LambdaSpace bad = space(lat, {0, 1}, {});
  CHECK(code_of([&] { canonical_amalgam(base, bad, f2); }) == ErrorCode::kInvalidFactor);

  const LatticeRef m3 = share(make_m3());
  const LambdaSpace mb = space(m3, {0}, {});
  CHECK(code_of([&] {
          canonical_amalgam(mb, extend(mb, 1, {el(m3, "a")}), extend(mb, 2, {el(m3, "b")}));
        }) == ErrorCode::kNonDistributive);
}

TEST_CASE("amalgamation_failure_probe") {
  for (const LatticeRef& lat : {share(make_m3()), share(make_n5())}) {
    const auto failure = amalgamation_failure_probe(lat);
    REQUIRE(failure.has_value());
    CHECK(validate_space(failure->f1).ok());
    CHECK(validate_space(failure->f2).ok());
    CHECK(oracle::all_completions(failure->base, failure->f1, failure->f2).empty());
  }
  CHECK_FALSE(amalgamation_failure_probe(share(make_chain(4))).has_value());
}
