#include <filesystem>
#include <functional>

#include "doctest.h"
#include "permlat/generic.hpp"
#include "permlat/io.hpp"

using namespace permlat;

namespace {

const std::filesystem::path kData = PERMLAT_TEST_DATA;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kPrecondition;
}

}  // namespace

TEST_CASE("lattice files load and round trip") {
  const FiniteLattice b2 = io::load_lattice(kData / "b2.lat");
  CHECK(isomorphic(b2, make_boolean(2)));
  CHECK(b2.name(b2.bottom()) == "0");
  CHECK(b2.name(b2.top()) == "1");

  const std::string text = io::format_lattice(b2.poset());
  CHECK(io::parse_poset(text) == b2.poset());
  CHECK(io::format_lattice(io::parse_poset(text)) == text);

  CHECK(isomorphic(io::load_lattice(kData / "m3.lat"), make_m3()));
  CHECK(isomorphic(io::load_lattice(kData / "n5.lat"), make_n5()));
}

TEST_CASE("cover lines may list order pairs that are not covers") {
  const FinitePoset p = io::parse_poset("elements: 0 a 1\ncover: 0 < a\ncover: a < 1\ncover: 0 < 1\n");
  CHECK(p.hasse_edges().size() == 2);
}

TEST_CASE("malformed lattice files") {
  CHECK(code_of([] { io::load_lattice(kData / "bad_syntax.lat"); }) == ErrorCode::kParse);
  CHECK(code_of([] { io::load_lattice(kData / "no_top.lat"); }) == ErrorCode::kInvalidLattice);
  CHECK(code_of([] { io::load_lattice(kData / "absent.lat"); }) == ErrorCode::kIo);
  CHECK(code_of([] { io::parse_poset("cover: 0 < 1\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { io::parse_poset("elements: 0 0\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { io::parse_poset("elements: 0 1\ncover: 0 < 2\n"); }) == ErrorCode::kParse);
  // A cycle parses but is not a lattice.
  CHECK(code_of([] { io::parse_lattice("elements: 0 1\ncover: 0 < 1\ncover: 1 < 0\n"); }) ==
        ErrorCode::kInvalidLattice);
}

TEST_CASE("parse errors carry the line number") {
  try {
    io::parse_poset("elements: 0 1\n\n# comment\ncover: 0 < x\n");
    FAIL("no error thrown");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("space files") {
  const OrderedLambdaStructure s = io::load_structure(kData / "tri.space");
  CHECK(s.orders.empty());
  REQUIRE(s.space.size() == 3);
  const FiniteLattice& lat = s.space.lattice();
  CHECK(s.space.distance(1, 2) == *lat.find("a"));
  CHECK(s.space.distance(2, 3) == lat.top());
  CHECK(s.space.distance(3, 3) == lat.bottom());
  CHECK(validate_space(s.space).ok());

  CHECK_FALSE(validate_space(io::load_structure(kData / "bad_triangle.space").space).ok());
  CHECK(code_of([] { io::load_structure(kData / "missing_pair.space"); }) == ErrorCode::kParse);
  CHECK(io::lattice_reference(io::read_file(kData / "tri.space")) == "chain3.lat");
}

TEST_CASE("space syntax errors") {
  const LatticeRef lat = share(make_chain(3));
  CHECK(code_of([&] { io::parse_structure("d: 1 2 a\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure("points: 1 1\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure("points: 1 2\nd: 1 2 z\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure("points: 1 2\nd: 1 2 a\nd: 2 1 a\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure("points: 1 2\nd: 1 1 a\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure("points: 1 x\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure("points: 1\nrank: 1 0\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure("points: 1\nwhat: 1\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::load_structure(kData / "absent.space"); }) == ErrorCode::kIo);
}

TEST_CASE("order blocks") {
  const OrderedLambdaStructure s = io::load_structure(kData / "tri.struct");
  REQUIRE(s.orders.size() == 2);
  CHECK(validate_structure(s).ok());
  // Point 2 shares the bottom class of point 1 in the first order.
  CHECK(s.orders[0].ranks() == std::vector<int>{1, 1, 0});
  CHECK(s.orders[1].ranks() == std::vector<int>{0, 1, 0});

  const OrderedLambdaStructure bad = io::load_structure(kData / "bad_rank.struct");
  CHECK_FALSE(validate_structure(bad).ok());

  const LatticeRef lat = s.space.lattice_ref();
  const std::string head = io::format_space(s.space, "chain3.lat");
  CHECK(code_of([&] { io::parse_structure(head + "sq: a 1\nrank: 1 0\n", lat); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_structure(head + "sq: a 1\nrank: 1 0\nrank: 2 1\nrank: 3 0\n", lat); }) ==
        ErrorCode::kParse);
}

TEST_CASE("structure text round trip is byte stable") {
  const LatticeRef lat = share(make_boolean(2));
  const std::vector<OrderSpec> sig = catalog_signature(*lat);
  const GenerationResult gen = generate_generic(lat, sig, {3, 25, 2});
  const std::string text = io::format_structure(gen.structure, "b2.lat");
  const OrderedLambdaStructure back = io::parse_structure(text, lat);
  CHECK(back == gen.structure);
  CHECK(io::format_structure(back, "b2.lat") == text);
}

TEST_CASE("perm files") {
  const PermStructure p = io::parse_perm(io::read_file(kData / "identity.perm"));
  CHECK(p.dimension() == 2);
  CHECK(p.size() == 4);
  CHECK(validate_perm(p).ok());
  CHECK(io::parse_perm(io::format_perm(p)) == p);

  CHECK_FALSE(validate_perm(io::parse_perm(io::read_file(kData / "bad.perm"))).ok());
  CHECK(code_of([] { io::parse_perm("n 2\n0\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { io::parse_perm("0 1\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { io::parse_perm("n 0\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { io::parse_perm("n 17\n"); }) == ErrorCode::kSizeCapExceeded);
}

TEST_CASE("cover files") {
  const FiniteLattice chain4 = io::load_lattice(kData / "chain4.lat");
  const ChainCover cover = io::parse_cover(io::read_file(kData / "chain4.cover"), chain4);
  REQUIRE(cover.chains.size() == 2);
  CHECK(cover.chains[0] == std::vector<Elem>{*chain4.find("a")});
  CHECK_NOTHROW(check_cover(chain4, cover));
  CHECK(io::format_cover(cover, chain4) == io::read_file(kData / "chain4.cover"));
  CHECK(code_of([&] { io::parse_cover("chain: q\n", chain4); }) == ErrorCode::kParse);
  CHECK(code_of([&] { io::parse_cover("chain:\n", chain4); }) == ErrorCode::kParse);
}
