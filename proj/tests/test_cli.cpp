#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "permlat/io.hpp"

using namespace permlat;
namespace fs = std::filesystem;

namespace {

const fs::path kData = PERMLAT_TEST_DATA;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (kData / name).string(); }

// Scratch directory holding copies of the lattice fixtures.
struct Scratch {
  fs::path dir;

  explicit Scratch(const std::string& tag) {
    dir = fs::temp_directory_path() / ("permlat_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    for (const char* f : {"chain2.lat", "chain3.lat", "b2.lat"}) fs::copy_file(kData / f, dir / f);
  }
  ~Scratch() { fs::remove_all(dir); }

  std::string operator()(const std::string& rel) const { return (dir / rel).string(); }
};

}  // namespace

TEST_CASE("lattice check exit codes") {
  const Run m3 = run({"lattice", "check", data("m3.lat")});
  CHECK(m3.code == 1);
  CHECK(m3.out.find("not distributive") != std::string::npos);
  CHECK(m3.out.find("M3 sublattice on 0 a b c 1") != std::string::npos);

  const Run n5 = run({"lattice", "check", data("n5.lat"), "--json"});
  CHECK(n5.code == 1);
  const auto doc = nlohmann::json::parse(n5.out);
  CHECK(doc["distributive"] == false);
  CHECK(doc["witness"]["kind"] == "N5");
  CHECK(doc["witness"]["elements"].size() == 5);

  CHECK(run({"lattice", "check", data("b2.lat")}).code == 0);
  CHECK(run({"lattice", "check", data("chain2.lat")}).code == 0);
  const Run no_top = run({"lattice", "check", data("no_top.lat")});
  CHECK(no_top.code == 1);
  CHECK(no_top.out.find("missing_upper_bound") != std::string::npos);
  CHECK(run({"lattice", "check", data("bad_syntax.lat")}).code == 1);

  const Run absent = run({"lattice", "check", data("absent.lat"), "--json"});
  CHECK(absent.code == 1);
  CHECK(nlohmann::json::parse(absent.out)["error"]["code"] == "IO_ERROR");
}

TEST_CASE("usage errors exit 2 and name the offending argument") {
  CHECK(run({}).code == 2);
  const Run unknown = run({"gen", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("--bogus") != std::string::npos);
  const Run sub = run({"lattice", "chekc", "x"});
  CHECK(sub.code == 2);
  CHECK(sub.err.find("chekc") != std::string::npos);
  const Run grammar = run({"gen", "--lattice", data("chain2.lat"), "--orders", "0-1"});
  CHECK(grammar.code == 2);
  CHECK(grammar.err.find("--orders") != std::string::npos);
  const Run missing = run({"check", "ext", "--in", data("tri.struct")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--k") != std::string::npos);
  CHECK(run({"profile", "--in", data("identity.perm"), "--k", "0"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("lattice bounds and enum") {
  const Run b = run({"lattice", "bounds", data("chain4.lat"), "--json"});
  REQUIRE(b.code == 0);
  const auto doc = nlohmann::json::parse(b.out);
  CHECK(doc["upper"] == 3);
  CHECK(doc["cover"] == nlohmann::json::parse(R"([["a","b"]])"));
  CHECK(run({"lattice", "bounds", data("m3.lat")}).code == 1);

  const Run dist = run({"lattice", "enum", "--max", "5"});
  CHECK(dist.code == 0);
  CHECK(dist.out.find("# total 7") != std::string::npos);
  const Run all = run({"lattice", "enum", "--max", "5", "--all", "--json"});
  CHECK(nlohmann::json::parse(all.out)["lattices"].size() == 9);
  CHECK(run({"lattice", "enum", "--max", "9"}).code == 2);
}

TEST_CASE("space commands") {
  CHECK(run({"space", "check", data("tri.space")}).code == 0);
  const Run bad = run({"space", "check", data("bad_triangle.space"), "--json"});
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.out)["violations"][0]["kind"] == "triangle");
  CHECK(run({"space", "check", data("missing_pair.space")}).code == 1);

  Scratch tmp("space");
  const Run am = run({"space", "amalgam", data("base.space"), data("f1.space"), data("f2.space"), "--out",
                      tmp("a/am.space")});
  REQUIRE(am.code == 0);
  const OrderedLambdaStructure s = io::load_structure(tmp("a/am.space"));
  CHECK(s.space.size() == 3);
  CHECK(s.space.distance(2, 3) == *s.space.lattice().find("a"));

  CHECK(run({"space", "probe", data("m3.lat")}).code == 1);
  CHECK(run({"space", "probe", data("chain3.lat")}).code == 0);
}

TEST_CASE("sq commands") {
  CHECK(run({"sq", "check", data("tri.struct")}).code == 0);
  CHECK(run({"sq", "check", data("bad_rank.struct")}).code == 1);

  const Run composed = run({"sq", "compose", data("tri.struct"), "--lo", "1", "--hi", "0", "--json"});
  REQUIRE(composed.code == 0);
  const auto doc = nlohmann::json::parse(composed.out);
  CHECK(doc["bottom"] == "0");
  CHECK(doc["top"] == "1");
  CHECK(doc["ranks"] == nlohmann::json::parse("[1, 2, 0]"));

  const Run mismatch = run({"sq", "compose", data("tri.struct"), "--lo", "0", "--hi", "1"});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.find("TOP_BOTTOM_MISMATCH") != std::string::npos);
  CHECK(run({"sq", "compose", data("tri.struct"), "--lo", "0", "--hi", "7"}).code == 1);

  const Run split = run({"sq", "split", data("tri.struct"), "--order", "0", "--at", "a"});
  CHECK(split.code == 0);
  CHECK(split.out.find("sq: a 1") != std::string::npos);
  CHECK(run({"sq", "split", data("tri.struct"), "--order", "0", "--at", "q"}).code == 1);
}

TEST_CASE("gen is byte deterministic and replays") {
  Scratch tmp("gen");
  const std::vector<std::string> base{"gen", "--lattice", tmp("chain2.lat"), "--orders", "0:1,0:1",
                                      "--size", "40", "--seed", "7"};
  auto with_out = [&](const std::string& out) {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--out", out});
    return run(args);
  };
  REQUIRE(with_out(tmp("a/s.struct")).code == 0);
  REQUIRE(with_out(tmp("b/s.struct")).code == 0);
  CHECK(io::read_file(tmp("a/s.struct")) == io::read_file(tmp("b/s.struct")));
  CHECK(io::read_file(tmp("a/s.struct.manifest")) == io::read_file(tmp("b/s.struct.manifest")));
  CHECK(run(base).out == run(base).out);

  std::vector<std::string> other = base;
  other[8] = "8";
  CHECK(run(other).out != run(base).out);

  CHECK(run({"replay", tmp("a/s.struct.manifest")}).code == 0);
  CHECK(io::load_structure(tmp("a/s.struct")).space.size() == 40);

  io::write_file(tmp("chain2.lat"), io::read_file(tmp("chain2.lat")) + "# edited\n");
  const Run changed = run({"replay", tmp("a/s.struct.manifest")});
  CHECK(changed.code == 1);
  CHECK(changed.out.find("input changed") != std::string::npos);

  CHECK(run({"gen", "--lattice", tmp("chain2.lat"), "--orders", "0:z"}).code == 1);
}

TEST_CASE("check ext and hom report failures with exit 1") {
  Scratch tmp("check");
  REQUIRE(run({"gen", "--lattice", tmp("chain2.lat"), "--size", "20", "--out", tmp("a/s.struct")}).code == 0);
  const Run ext = run({"check", "ext", "--in", tmp("a/s.struct"), "--k", "1", "--json"});
  CHECK(ext.code == 1);
  CHECK(nlohmann::json::parse(ext.out)["satisfied"] == false);
  CHECK(run({"check", "hom", "--in", tmp("a/s.struct"), "--k", "1"}).code == 1);

  CHECK(run({"check", "ext", "--in", data("tri.space"), "--k", "0"}).code == 0);
  CHECK(run({"check", "ext", "--in", data("bad_rank.struct"), "--k", "1"}).code == 1);
}

TEST_CASE("encode, decode and profile") {
  Scratch tmp("encode");
  REQUIRE(run({"gen", "--lattice", tmp("b2.lat"), "--size", "40", "--seed", "2", "--out", tmp("a/b2.struct")})
              .code == 0);
  const Run e1 = run({"encode", "--in", tmp("a/b2.struct"), "--cover", "auto", "--out", tmp("a/b2.perm")});
  REQUIRE(e1.code == 0);
  const std::string first = io::read_file(tmp("a/b2.perm"));
  const std::string book = io::read_file(tmp("a/b2.perm.codebook.json"));
  REQUIRE(run({"encode", "--in", tmp("a/b2.struct"), "--out", tmp("a/b2.perm")}).code == 0);
  CHECK(io::read_file(tmp("a/b2.perm")) == first);
  CHECK(io::read_file(tmp("a/b2.perm.codebook.json")) == book);
  CHECK(nlohmann::json::parse(book)["dimension"] == 4);
  CHECK(run({"replay", tmp("a/b2.perm.manifest")}).code == 0);

  const Run d = run({"decode", "--in", tmp("a/b2.perm"), "--json"});
  REQUIRE(d.code == 0);
  const auto doc = nlohmann::json::parse(d.out);
  CHECK(doc["lattice"]["elements"].size() == 4);
  CHECK(doc["lattice"]["hasse"].size() == 4);
  CHECK(doc["distributive"] == true);

  CHECK(run({"decode", "--in", data("bad.perm")}).code == 1);
  const Run p = run({"profile", "--in", data("identity.perm"), "--k", "2", "--json"});
  CHECK(nlohmann::json::parse(p.out)["types"] == 2);
  CHECK(run({"encode", "--in", tmp("a/b2.struct"), "--cover", data("absent.cover")}).code == 1);
}

TEST_CASE("cameron") {
  const Run c = run({"cameron", "--size", "30", "--json"});
  REQUIRE(c.code == 0);
  const auto doc = nlohmann::json::parse(c.out);
  CHECK(doc["sweep"].size() == 12);
  CHECK(doc["profiles"].size() == 5);
  CHECK(doc["faithful"] == 5);
}
