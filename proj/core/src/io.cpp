#include "permlat/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace permlat::io {
namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string_view> tokens;
};

// Non-empty, non-comment lines split on whitespace.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    ++number;
    start = end + 1;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.tokens.empty() && line.tokens.front().front() != '#') lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + message);
}

template <typename Int>
Int to_int(std::string_view token, std::size_t line) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail(line, "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

Elem element(const FinitePoset& poset, std::string_view name, std::size_t line) {
  const auto e = poset.find(name);
  if (!e) fail(line, "unknown lattice element '" + std::string(name) + "'");
  return *e;
}

void expect_arity(const Line& line, std::size_t n, std::string_view shape) {
  if (line.tokens.size() != n) fail(line.number, "expected '" + std::string(shape) + "'");
}

std::string first_violation(const ValidationReport& report) {
  const Violation& v = report.violations.front();
  std::string out = v.kind;
  for (const auto& w : v.witness) out += " " + w;
  if (!v.detail.empty()) out += " (" + v.detail + ")";
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

FinitePoset parse_poset(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty() || lines.front().tokens.front() != "elements:") {
    fail(lines.empty() ? 1 : lines.front().number, "expected 'elements:' header");
  }
  std::vector<std::string> names;
  for (std::size_t i = 1; i < lines.front().tokens.size(); ++i) {
    const std::string name(lines.front().tokens[i]);
    for (const auto& seen : names) {
      if (seen == name) fail(lines.front().number, "repeated element '" + name + "'");
    }
    names.push_back(name);
  }
  if (names.empty()) fail(lines.front().number, "no elements");
  if (names.size() > kMaxLatticeSize) {
    throw Error(ErrorCode::kSizeCapExceeded, "more than " + std::to_string(kMaxLatticeSize) + " elements");
  }
  auto index = [&](std::string_view name, std::size_t line) -> Elem {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<Elem>(i);
    }
    fail(line, "unknown element '" + std::string(name) + "'");
  };
  std::vector<std::pair<Elem, Elem>> covers;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    if (line.tokens.front() != "cover:") fail(line.number, "expected 'cover: x < y'");
    expect_arity(line, 4, "cover: x < y");
    if (line.tokens[2] != "<") fail(line.number, "expected 'cover: x < y'");
    covers.emplace_back(index(line.tokens[1], line.number), index(line.tokens[3], line.number));
  }
  return FinitePoset::from_covers(std::move(names), covers);
}

std::string format_lattice(const FinitePoset& poset) {
  std::string out = "elements:";
  for (const auto& name : poset.names()) out += " " + name;
  out += "\n";
  for (const auto& [lo, hi] : poset.hasse_edges()) {
    out += "cover: " + poset.name(lo) + " < " + poset.name(hi) + "\n";
  }
  return out;
}

FiniteLattice parse_lattice(std::string_view text) {
  FinitePoset poset = parse_poset(text);
  const ValidationReport report = validate_lattice(poset);
  if (!report.ok()) throw Error(ErrorCode::kInvalidLattice, first_violation(report));
  return FiniteLattice::from_poset(std::move(poset));
}

FiniteLattice load_lattice(const std::filesystem::path& path) {
  return parse_lattice(read_file(path));
}

std::string lattice_reference(std::string_view text) {
  for (const Line& line : tokenize(text)) {
    if (line.tokens.front() == "lattice:") {
      expect_arity(line, 2, "lattice: PATH");
      return std::string(line.tokens[1]);
    }
  }
  throw Error(ErrorCode::kParse, "missing 'lattice:' header");
}

std::filesystem::path resolve_lattice(const std::filesystem::path& file, std::string_view text) {
  std::filesystem::path lattice_path = lattice_reference(text);
  if (lattice_path.is_relative()) lattice_path = file.parent_path() / lattice_path;
  return lattice_path;
}

OrderedLambdaStructure parse_structure(std::string_view text, const LatticeRef& lattice) {
  const FinitePoset& poset = lattice->poset();
  const std::vector<Line> lines = tokenize(text);

  struct Block {
    std::size_t line = 0;
    Elem bottom = 0;
    Elem top = 0;
    std::vector<std::pair<std::size_t, int>> ranks;  // (position, rank)
    std::vector<std::size_t> rank_lines;
  };

  std::optional<std::size_t> points_line;
  std::vector<PointId> points;
  std::vector<std::optional<Elem>> dist;
  std::vector<Block> blocks;
  auto position = [&](std::string_view token, std::size_t line) {
    const PointId id = to_int<PointId>(token, line);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] == id) return i;
    }
    fail(line, "unknown point " + std::string(token));
  };

  bool seen_lattice = false;
  for (const Line& line : lines) {
    const std::string_view key = line.tokens.front();
    if (key == "lattice:") {
      if (seen_lattice) fail(line.number, "repeated 'lattice:' header");
      expect_arity(line, 2, "lattice: PATH");
      seen_lattice = true;
    } else if (key == "points:") {
      if (points_line) fail(line.number, "repeated 'points:' line");
      points_line = line.number;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const PointId id = to_int<PointId>(line.tokens[i], line.number);
        for (PointId seen : points) {
          if (seen == id) fail(line.number, "repeated point " + std::to_string(id));
        }
        points.push_back(id);
      }
      dist.assign(points.size() * points.size(), std::nullopt);
      for (std::size_t i = 0; i < points.size(); ++i) dist[i * points.size() + i] = lattice->bottom();
    } else if (key == "d:") {
      if (!points_line) fail(line.number, "'d:' before 'points:'");
      expect_arity(line, 4, "d: x y λ");
      const std::size_t i = position(line.tokens[1], line.number);
      const std::size_t j = position(line.tokens[2], line.number);
      if (i == j) fail(line.number, "distance from a point to itself");
      const Elem value = element(poset, line.tokens[3], line.number);
      auto& cell = dist[i * points.size() + j];
      if (cell) fail(line.number, "repeated pair");
      cell = value;
      dist[j * points.size() + i] = value;
    } else if (key == "sq:") {
      expect_arity(line, 3, "sq: BOTTOM TOP");
      blocks.push_back(Block{line.number, element(poset, line.tokens[1], line.number),
                             element(poset, line.tokens[2], line.number), {}, {}});
    } else if (key == "rank:") {
      if (blocks.empty()) fail(line.number, "'rank:' outside an 'sq:' block");
      if (!points_line) fail(line.number, "'rank:' before 'points:'");
      expect_arity(line, 3, "rank: CLASS_REP INT");
      blocks.back().ranks.emplace_back(position(line.tokens[1], line.number),
                                       to_int<int>(line.tokens[2], line.number));
      blocks.back().rank_lines.push_back(line.number);
    } else {
      fail(line.number, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!points_line) throw Error(ErrorCode::kParse, "missing 'points:' line");

  const std::size_t n = points.size();
  std::vector<Elem> distances(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!dist[i * n + j]) {
        throw Error(ErrorCode::kParse, "missing distance between points " + std::to_string(points[i]) + " and " +
                                           std::to_string(points[j]));
      }
      distances[i * n + j] = *dist[i * n + j];
    }
  }

  OrderedLambdaStructure s{LambdaSpace(lattice, std::move(points), std::move(distances)), {}};
  for (const Block& block : blocks) {
    std::vector<std::optional<int>> ranks(n);
    std::vector<std::size_t> source(n);
    for (std::size_t r = 0; r < block.ranks.size(); ++r) {
      const auto [rep, value] = block.ranks[r];
      for (std::size_t x = 0; x < n; ++x) {
        if (!lattice->leq(s.space.d(rep, x), block.bottom)) continue;
        if (ranks[x]) {
          fail(block.rank_lines[r], "point " + std::to_string(s.space.point(x)) + " already ranked on line " +
                                        std::to_string(block.rank_lines[source[x]]));
        }
        ranks[x] = value;
        source[x] = r;
      }
    }
    std::vector<int> dense(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (!ranks[x]) fail(block.line, "point " + std::to_string(s.space.point(x)) + " has no rank");
      dense[x] = *ranks[x];
    }
    s.orders.emplace_back(block.bottom, block.top, std::move(dense));
  }
  return s;
}

std::string format_space(const LambdaSpace& space, std::string_view lattice_path) {
  return format_structure(OrderedLambdaStructure{space, {}}, lattice_path);
}

std::string format_structure(const OrderedLambdaStructure& s, std::string_view lattice_path) {
  const LambdaSpace& space = s.space;
  const FiniteLattice& lat = space.lattice();
  const std::size_t n = space.size();
  std::string out = "lattice: " + std::string(lattice_path) + "\npoints:";
  for (PointId id : space.points()) out += " " + std::to_string(id);
  out += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out += "d: " + std::to_string(space.point(i)) + " " + std::to_string(space.point(j)) + " " +
             lat.name(space.d(i, j)) + "\n";
    }
  }
  for (const SubquotientOrder& o : s.orders) {
    out += "sq: " + lat.name(o.bottom()) + " " + lat.name(o.top()) + "\n";
    for (std::size_t x = 0; x < n; ++x) {
      bool first = true;
      for (std::size_t y = 0; y < x && first; ++y) first = !lat.leq(space.d(y, x), o.bottom());
      if (first) out += "rank: " + std::to_string(space.point(x)) + " " + std::to_string(o.rank(x)) + "\n";
    }
  }
  return out;
}

OrderedLambdaStructure load_structure(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_structure(text, share(load_lattice(resolve_lattice(path, text))));
}

PermStructure parse_perm(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty() || lines.front().tokens.front() != "n") {
    fail(lines.empty() ? 1 : lines.front().number, "expected 'n N' header");
  }
  expect_arity(lines.front(), 2, "n N");
  const auto dim = to_int<std::size_t>(lines.front().tokens[1], lines.front().number);
  if (dim == 0) fail(lines.front().number, "at least one order is required");
  if (dim > kMaxPermDimension) {
    throw Error(ErrorCode::kSizeCapExceeded, "more than " + std::to_string(kMaxPermDimension) + " orders");
  }
  PermStructure p;
  p.orders.assign(dim, {});
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    if (line.tokens.size() != dim) {
      fail(line.number, "expected " + std::to_string(dim) + " ranks, got " + std::to_string(line.tokens.size()));
    }
    for (std::size_t i = 0; i < dim; ++i) p.orders[i].push_back(to_int<int>(line.tokens[i], line.number));
  }
  return p;
}

std::string format_perm(const PermStructure& p) {
  std::string out = "n " + std::to_string(p.dimension()) + "\n";
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t i = 0; i < p.dimension(); ++i) {
      if (i > 0) out += " ";
      out += std::to_string(p.orders[i][x]);
    }
    out += "\n";
  }
  return out;
}

ChainCover parse_cover(std::string_view text, const FiniteLattice& lattice) {
  ChainCover cover;
  for (const Line& line : tokenize(text)) {
    if (line.tokens.front() != "chain:") fail(line.number, "expected 'chain: a b ...'");
    if (line.tokens.size() < 2) fail(line.number, "empty chain");
    std::vector<Elem> chain;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
      chain.push_back(element(lattice.poset(), line.tokens[i], line.number));
    }
    cover.chains.push_back(std::move(chain));
  }
  return cover;
}

std::string format_cover(const ChainCover& cover, const FiniteLattice& lattice) {
  std::string out;
  for (const auto& chain : cover.chains) {
    out += "chain:";
    for (Elem e : chain) out += " " + lattice.name(e);
    out += "\n";
  }
  return out;
}

}  // namespace permlat::io
