#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "artifact.hpp"
#include "json.hpp"
#include "permlat/io.hpp"

namespace permlat::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
};

struct Loaded {
  OrderedLambdaStructure s;
  fs::path lattice_path;
};

Loaded load(const fs::path& file) {
  const std::string text = io::read_file(file);
  fs::path lattice_path = io::resolve_lattice(file, text);
  OrderedLambdaStructure s = io::parse_structure(text, share(io::load_lattice(lattice_path)));
  return {std::move(s), std::move(lattice_path)};
}

// Lattice header for a structure written to `out` (stdout when empty).
std::string header_for(const fs::path& lattice_path, const std::string& out) {
  return relative_to(lattice_path, out.empty() ? fs::path() : fs::path(out).parent_path());
}

void emit(Context& ctx, const std::string& text, const std::string& out) {
  if (out.empty()) {
    ctx.out << text;
  } else {
    io::write_file(out, text);
  }
}

json violations_json(const ValidationReport& report) {
  json arr = json::array();
  for (const Violation& v : report.violations) {
    arr.push_back({{"kind", v.kind}, {"witness", v.witness}, {"detail", v.detail}});
  }
  return arr;
}

void print_violations(std::ostream& os, const ValidationReport& report) {
  for (const Violation& v : report.violations) {
    os << "  " << v.kind;
    for (const auto& w : v.witness) os << " " << w;
    if (!v.detail.empty()) os << " (" << v.detail << ")";
    os << "\n";
  }
}

std::string ids(const LambdaSpace& space, const std::vector<std::size_t>& positions) {
  std::string out = "[";
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i > 0) out += " ";
    out += std::to_string(space.point(positions[i]));
  }
  return out + "]";
}

json lattice_json(const FiniteLattice& lat) {
  json covers = json::array();
  for (const auto& [lo, hi] : lat.poset().hasse_edges()) covers.push_back({lat.name(lo), lat.name(hi)});
  return {{"elements", lat.poset().names()}, {"covers", covers}};
}

void print_json(Context& ctx, const json& doc) { ctx.out << doc.dump(2) << "\n"; }

const OrderedLambdaStructure& require_valid(Context& ctx, const OrderedLambdaStructure& s) {
  const ValidationReport report = validate_structure(s);
  if (!report.ok()) {
    std::ostringstream detail;
    print_violations(detail, report);
    ctx.err << "invalid structure:\n" << detail.str();
    throw Error(ErrorCode::kInvalidSpace, "input structure does not validate");
  }
  return s;
}

const SubquotientOrder& order_at(const OrderedLambdaStructure& s, std::size_t i) {
  if (i >= s.orders.size()) {
    throw Error(ErrorCode::kPrecondition,
                "order index " + std::to_string(i) + " out of range (" + std::to_string(s.orders.size()) + " orders)");
  }
  return s.orders[i];
}

// ---- lattice ----

int lattice_check(Context& ctx, const std::string& file) {
  const FinitePoset poset = io::parse_poset(io::read_file(file));
  const ValidationReport report = validate_lattice(poset);
  json doc = {{"file", file}, {"elements", poset.size()}, {"lattice", report.ok()},
              {"violations", violations_json(report)}, {"distributive", nullptr}, {"witness", nullptr}};
  if (!report.ok()) {
    if (ctx.json) {
      print_json(ctx, doc);
    } else {
      ctx.out << "invalid: not a lattice\n";
      print_violations(ctx.out, report);
    }
    return kExitInvalid;
  }
  const FiniteLattice lat = FiniteLattice::from_poset(poset);
  const DistributivityResult d = is_distributive(lat);
  doc["distributive"] = d.distributive;
  std::string kind;
  std::vector<std::string> witness;
  if (d.witness) {
    kind = d.witness->kind == ForbiddenSublattice::kM3 ? "M3" : "N5";
    for (Elem e : d.witness->elements) witness.push_back(lat.name(e));
    doc["witness"] = {{"kind", kind}, {"elements", witness}};
  }
  if (ctx.json) {
    print_json(ctx, doc);
  } else if (d.distributive) {
    ctx.out << "ok: distributive lattice with " << lat.size() << " elements\n";
  } else {
    ctx.out << "invalid: not distributive, " << kind << " sublattice on";
    for (const auto& w : witness) ctx.out << " " << w;
    ctx.out << "\n";
  }
  return d.distributive ? kExitOk : kExitInvalid;
}

int lattice_bounds(Context& ctx, const std::string& file) {
  const FiniteLattice lat = io::load_lattice(file);
  const DimensionBounds b = dimension_bounds(lat);
  json chains = json::array();
  for (const auto& chain : b.cover.chains) {
    json names = json::array();
    for (Elem e : chain) names.push_back(lat.name(e));
    chains.push_back(names);
  }
  if (ctx.json) {
    print_json(ctx, {{"file", file},
                     {"lower", b.lower},
                     {"upper", b.upper},
                     {"width", b.width},
                     {"exhaustive", b.exhaustive},
                     {"cover", chains},
                     {"note", b.note}});
    return kExitOk;
  }
  ctx.out << "lower: " << b.lower << "\nupper: " << b.upper << "\nwidth: " << b.width
          << "\nexhaustive: " << (b.exhaustive ? "yes" : "no") << "\n";
  ctx.out << io::format_cover(b.cover, lat);
  if (!b.note.empty()) ctx.out << "note: " << b.note << "\n";
  return kExitOk;
}

int lattice_enum(Context& ctx, std::size_t max_size, bool all) {
  const std::vector<FiniteLattice> lattices =
      all ? enumerate_lattices(max_size) : enumerate_distributive_lattices(max_size);
  if (ctx.json) {
    json arr = json::array();
    for (const auto& lat : lattices) arr.push_back(lattice_json(lat));
    print_json(ctx, {{"max_size", max_size}, {"distributive_only", !all}, {"lattices", arr}});
    return kExitOk;
  }
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    ctx.out << "# lattice " << i << ": " << lattices[i].size() << " elements\n"
            << io::format_lattice(lattices[i].poset()) << "\n";
  }
  ctx.out << "# total " << lattices.size() << "\n";
  return kExitOk;
}

// ---- space ----

int space_check(Context& ctx, const std::string& file) {
  const Loaded in = load(file);
  const ValidationReport report = validate_space(in.s.space);
  if (ctx.json) {
    print_json(ctx, {{"file", file},
                     {"points", in.s.space.size()},
                     {"valid", report.ok()},
                     {"violations", violations_json(report)}});
  } else if (report.ok()) {
    ctx.out << "ok: " << in.s.space.size() << " points\n";
  } else {
    ctx.out << "invalid:\n";
    print_violations(ctx.out, report);
  }
  return report.ok() ? kExitOk : kExitInvalid;
}

int space_amalgam(Context& ctx, const std::string& base_file, const std::string& f1_file,
                  const std::string& f2_file, const std::string& out) {
  const Loaded base = load(base_file);
  const LatticeRef lat = base.s.space.lattice_ref();
  auto factor = [&](const std::string& file) {
    const Loaded f = load(file);
    if (!(f.s.space.lattice().poset() == lat->poset())) {
      throw Error(ErrorCode::kInvalidFactor, file + " uses a different lattice from " + base_file);
    }
    return io::parse_structure(io::read_file(file), lat).space;
  };
  const LambdaSpace f1 = factor(f1_file);
  const LambdaSpace f2 = factor(f2_file);
  const AmalgamResult r = canonical_amalgam(base.s.space, f1, f2);
  std::string text = io::format_space(r.space, header_for(base.lattice_path, out));
  for (const auto& [a, b] : r.identified) {
    text += "# identified: " + std::to_string(a) + " " + std::to_string(b) + "\n";
  }
  const bool valid = validate_space(r.space).ok();
  if (ctx.json) {
    json identified = json::array();
    for (const auto& [a, b] : r.identified) identified.push_back({a, b});
    if (!out.empty()) io::write_file(out, text);
    print_json(ctx, {{"points", r.space.points()},
                     {"identified", identified},
                     {"valid", valid},
                     {"space", out.empty() ? json(text) : json(nullptr)}});
  } else {
    emit(ctx, text, out);
  }
  return valid ? kExitOk : kExitInvalid;
}

int space_probe(Context& ctx, const std::string& file) {
  const LatticeRef lat = share(io::load_lattice(file));
  const auto failure = amalgamation_failure_probe(lat);
  const std::string header = header_for(file, "");
  if (ctx.json) {
    json doc = {{"file", file}, {"max_base", kProbeMaxBase}, {"max_new", kProbeMaxNew}, {"failure", nullptr}};
    if (failure) {
      doc["failure"] = {{"base", io::format_space(failure->base, header)},
                        {"f1", io::format_space(failure->f1, header)},
                        {"f2", io::format_space(failure->f2, header)}};
    }
    print_json(ctx, doc);
  } else if (!failure) {
    ctx.out << "ok: every instance with |base| <= " << kProbeMaxBase << " and <= " << kProbeMaxNew
            << " new points per factor amalgamates\n";
  } else {
    ctx.out << "failure: no completion exists\n# base\n"
            << io::format_space(failure->base, header) << "# f1\n"
            << io::format_space(failure->f1, header) << "# f2\n"
            << io::format_space(failure->f2, header);
  }
  return failure ? kExitInvalid : kExitOk;
}

// ---- sq ----

int sq_check(Context& ctx, const std::string& file) {
  const Loaded in = load(file);
  const ValidationReport report = validate_structure(in.s);
  const FiniteLattice& lat = in.s.space.lattice();
  if (ctx.json) {
    json orders = json::array();
    for (const auto& o : in.s.orders) orders.push_back({{"bottom", lat.name(o.bottom())}, {"top", lat.name(o.top())}});
    print_json(ctx, {{"file", file},
                     {"points", in.s.space.size()},
                     {"orders", orders},
                     {"valid", report.ok()},
                     {"violations", violations_json(report)}});
  } else if (report.ok()) {
    ctx.out << "ok: " << in.s.space.size() << " points, " << in.s.orders.size() << " orders\n";
  } else {
    ctx.out << "invalid:\n";
    print_violations(ctx.out, report);
  }
  return report.ok() ? kExitOk : kExitInvalid;
}

int sq_compose(Context& ctx, const std::string& file, std::size_t lo, std::size_t hi, const std::string& out) {
  const Loaded in = load(file);
  const OrderedLambdaStructure& s = require_valid(ctx, in.s);
  const SubquotientOrder composed = compose_lex(s.space, order_at(s, lo), order_at(s, hi));
  const std::string text = io::format_structure({s.space, {composed}}, header_for(in.lattice_path, out));
  if (ctx.json) {
    if (!out.empty()) io::write_file(out, text);
    print_json(ctx, {{"bottom", s.space.lattice().name(composed.bottom())},
                     {"top", s.space.lattice().name(composed.top())},
                     {"ranks", composed.ranks()}});
  } else {
    emit(ctx, text, out);
  }
  return kExitOk;
}

int sq_split(Context& ctx, const std::string& file, std::size_t index, const std::string& at,
             const std::string& out) {
  const Loaded in = load(file);
  const OrderedLambdaStructure& s = require_valid(ctx, in.s);
  const FiniteLattice& lat = s.space.lattice();
  const auto e = lat.find(at);
  if (!e) throw Error(ErrorCode::kPrecondition, "unknown lattice element '" + at + "'");
  const SplitResult r = split_convex_linear(s.space, order_at(s, index), *e);
  const std::string text = io::format_structure({s.space, {r.within, r.between}}, header_for(in.lattice_path, out));
  if (ctx.json) {
    if (!out.empty()) io::write_file(out, text);
    auto order = [&](const SubquotientOrder& o) {
      return json{{"bottom", lat.name(o.bottom())}, {"top", lat.name(o.top())}, {"ranks", o.ranks()}};
    };
    print_json(ctx, {{"within", order(r.within)}, {"between", order(r.between)}});
  } else {
    emit(ctx, text, out);
  }
  return kExitOk;
}

// ---- generation and checks ----

struct GenFlags {
  std::string lattice;
  std::string orders = "catalog";
  std::size_t size = 40;
  std::size_t depth = 2;
  std::uint64_t seed = 0;
  std::string out;
};

int gen(Context& ctx, const GenFlags& f) {
  GenRequest req{f.lattice, header_for(f.lattice, f.out), f.orders, f.size, f.depth, f.seed};
  const GenOutput g = run_gen(req);
  for (const auto& w : g.result.warnings) ctx.err << "warning: " << w << "\n";
  std::string manifest_path;
  if (!f.out.empty()) {
    const fs::path out_dir = fs::path(f.out).parent_path();
    const std::string name = relative_to(f.out, out_dir);
    Manifest m;
    m.command = "gen";
    m.config = {{"lattice", req.lattice_header}, {"orders", f.orders}, {"size", f.size},
                {"depth", f.depth},              {"seed", f.seed},     {"out", name}};
    m.inputs = {{req.lattice_header, sha256_hex(io::read_file(f.lattice))}};
    m.outputs = {{name, sha256_hex(g.text)}};
    io::write_file(f.out, g.text);
    manifest_path = f.out + ".manifest";
    io::write_file(manifest_path, m.text());
  }
  const GenerationResult& r = g.result;
  if (ctx.json) {
    json doc = {{"points", r.structure.space.size()},
                {"orders", r.structure.orders.size()},
                {"warnings", r.warnings},
                {"fallback_steps", r.fallback_steps},
                {"saturation", {{"k", r.saturation.k}, {"types", r.saturation.types}, {"realized", r.saturation.realized}}},
                {"out", f.out.empty() ? json(nullptr) : json(f.out)},
                {"manifest", manifest_path.empty() ? json(nullptr) : json(manifest_path)},
                {"structure", f.out.empty() ? json(g.text) : json(nullptr)}};
    print_json(ctx, doc);
  } else if (f.out.empty()) {
    ctx.out << g.text;
  } else {
    ctx.out << "wrote " << f.out << ": " << r.structure.space.size() << " points, " << r.structure.orders.size()
            << " orders, " << r.fallback_steps << " fallback steps\n"
            << "manifest " << manifest_path << "\n";
  }
  return kExitOk;
}

std::string type_text(const FiniteLattice& lat, const LambdaSpace& space, const UnrealizedType& u) {
  std::string out = "over " + ids(space, u.over) + " distances [";
  for (std::size_t i = 0; i < u.type.distances.size(); ++i) {
    if (i > 0) out += " ";
    out += lat.name(u.type.distances[i]);
  }
  out += "] gaps [";
  for (std::size_t i = 0; i < u.type.gaps.size(); ++i) {
    if (i > 0) out += " ";
    out += u.type.gaps[i] ? std::to_string(*u.type.gaps[i]) : "-";
  }
  return out + "]";
}

int check_ext(Context& ctx, const std::string& file, std::size_t k) {
  const Loaded in = load(file);
  const OrderedLambdaStructure& s = require_valid(ctx, in.s);
  const ExtensionReport r = extension_property_check(s, k);
  const FiniteLattice& lat = s.space.lattice();
  if (ctx.json) {
    json missing = json::array();
    for (const auto& u : r.missing) {
      std::vector<PointId> over;
      for (std::size_t p : u.over) over.push_back(s.space.point(p));
      std::vector<std::string> dist;
      for (Elem e : u.type.distances) dist.push_back(lat.name(e));
      json gaps = json::array();
      for (const auto& g : u.type.gaps) gaps.push_back(g ? json(*g) : json(nullptr));
      missing.push_back({{"over", over}, {"distances", dist}, {"gaps", gaps}});
    }
    print_json(ctx, {{"k", r.k},
                     {"subsets", r.subsets},
                     {"types", r.types},
                     {"realized", r.realized},
                     {"ratio", r.ratio()},
                     {"satisfied", r.satisfied()},
                     {"missing", missing}});
  } else {
    ctx.out << (r.satisfied() ? "ok" : "failed") << ": k=" << r.k << " subsets=" << r.subsets
            << " types=" << r.types << " realized=" << r.realized << " ratio=" << r.ratio() << "\n";
    for (const auto& u : r.missing) ctx.out << "  missing " << type_text(lat, s.space, u) << "\n";
    if (r.types - r.realized > r.missing.size()) {
      ctx.out << "  ... " << (r.types - r.realized - r.missing.size()) << " more\n";
    }
  }
  return r.satisfied() ? kExitOk : kExitInvalid;
}

int check_hom(Context& ctx, const std::string& file, std::size_t m) {
  const Loaded in = load(file);
  const OrderedLambdaStructure& s = require_valid(ctx, in.s);
  const HomogeneityReport r = homogeneity_check(s, m);
  auto point_ids = [&](const std::vector<std::size_t>& positions) {
    std::vector<PointId> out;
    for (std::size_t p : positions) out.push_back(s.space.point(p));
    return out;
  };
  if (ctx.json) {
    json examples = json::array();
    for (const auto& f : r.examples) {
      examples.push_back({{"from", point_ids(f.from)}, {"to", point_ids(f.to)}, {"witness", s.space.point(f.witness)}});
    }
    print_json(ctx, {{"m", r.m}, {"tuples", r.tuples}, {"failures", r.failures}, {"ok", r.ok()}, {"examples", examples}});
  } else {
    ctx.out << (r.ok() ? "ok" : "failed") << ": m=" << r.m << " tuples=" << r.tuples << " failures=" << r.failures
            << "\n";
    for (const auto& f : r.examples) {
      ctx.out << "  " << ids(s.space, f.from) << " -> " << ids(s.space, f.to) << " loses the extension by point "
              << s.space.point(f.witness) << "\n";
    }
  }
  return r.ok() ? kExitOk : kExitInvalid;
}

// ---- permutation structures ----

struct EncodeFlags {
  std::string in;
  std::string cover = "auto";
  std::uint64_t seed = 0;
  std::string out;
};

int encode(Context& ctx, const EncodeFlags& f) {
  EncodeRequest req{f.in, f.cover == "auto" ? fs::path() : fs::path(f.cover), f.seed};
  const EncodeOutput e = run_encode(req);
  std::string manifest_path;
  if (!f.out.empty()) {
    const fs::path out_dir = fs::path(f.out).parent_path();
    const std::string name = relative_to(f.out, out_dir);
    Manifest m;
    m.command = "encode";
    m.config = {{"in", relative_to(f.in, out_dir)},
                {"cover", f.cover == "auto" ? f.cover : relative_to(f.cover, out_dir)},
                {"seed", f.seed},
                {"out", name}};
    for (const fs::path& p : e.inputs) m.inputs.emplace_back(relative_to(p, out_dir), sha256_hex(io::read_file(p)));
    m.outputs = {{name, sha256_hex(e.perm_text)}, {name + ".codebook.json", sha256_hex(e.codebook_text)}};
    io::write_file(f.out, e.perm_text);
    io::write_file(f.out + ".codebook.json", e.codebook_text);
    manifest_path = f.out + ".manifest";
    io::write_file(manifest_path, m.text());
  }
  if (ctx.json) {
    print_json(ctx, {{"dimension", e.result.perm.dimension()},
                     {"points", e.result.perm.size()},
                     {"bound", e.result.bound},
                     {"codebook", json::parse(e.codebook_text)},
                     {"manifest", manifest_path.empty() ? json(nullptr) : json(manifest_path)},
                     {"perm", f.out.empty() ? json(e.perm_text) : json(nullptr)}});
  } else if (f.out.empty()) {
    ctx.out << e.perm_text;
  } else {
    ctx.out << "wrote " << f.out << ": " << e.result.perm.dimension() << " orders (bound " << e.result.bound
            << ") on " << e.result.perm.size() << " points\n"
            << "codebook " << f.out << ".codebook.json\nmanifest " << manifest_path << "\n";
  }
  return kExitOk;
}

PermStructure load_perm(Context& ctx, const std::string& file) {
  PermStructure p = io::parse_perm(io::read_file(file));
  const ValidationReport report = validate_perm(p);
  if (!report.ok()) {
    std::ostringstream detail;
    print_violations(detail, report);
    ctx.err << "invalid permutation structure:\n" << detail.str();
    throw Error(ErrorCode::kPrecondition, "input is not a permutation structure");
  }
  return p;
}

int decode(Context& ctx, const std::string& file) {
  const DecodeReport d = decode_relations(load_perm(ctx, file));
  const FiniteLattice& lat = d.lattice;
  if (ctx.json) {
    json relations = json::array();
    for (std::size_t i = 0; i < d.relations.size(); ++i) {
      relations.push_back({{"name", lat.name(static_cast<Elem>(i))},
                           {"classes", d.relations[i].classes},
                           {"class_count", d.relations[i].class_count},
                           {"convex_in", d.relations[i].convex_in}});
    }
    json hasse = json::array();
    for (const auto& [a, b] : d.hasse) hasse.push_back({lat.name(a), lat.name(b)});
    print_json(ctx, {{"sample_size", d.sample_size},
                     {"dimension", d.dimension},
                     {"observed_classes", d.observed_classes},
                     {"relations", relations},
                     {"lattice", {{"elements", lat.poset().names()}, {"hasse", hasse}}},
                     {"distributive", d.distributive},
                     {"joins_are_closures", d.joins_are_closures}});
    return kExitOk;
  }
  ctx.out << "sample: " << d.sample_size << " points, " << d.dimension << " orders, " << d.observed_classes
          << " orientation classes\nrelations: " << d.relations.size() << "\n";
  for (std::size_t i = 0; i < d.relations.size(); ++i) {
    ctx.out << "  " << lat.name(static_cast<Elem>(i)) << ": " << d.relations[i].class_count << " classes, convex in [";
    for (std::size_t j = 0; j < d.relations[i].convex_in.size(); ++j) {
      ctx.out << (j > 0 ? " " : "") << d.relations[i].convex_in[j];
    }
    ctx.out << "]\n";
  }
  ctx.out << io::format_lattice(lat.poset()) << "distributive: " << (d.distributive ? "yes" : "no")
          << "\njoins are closures: " << (d.joins_are_closures ? "yes" : "no") << "\n";
  return kExitOk;
}

int profile_cmd(Context& ctx, const std::string& file, std::size_t k, std::size_t samples, std::uint64_t seed) {
  const Profile p = profile(load_perm(ctx, file), k, samples, seed);
  if (ctx.json) {
    print_json(ctx, {{"k", p.k}, {"exhaustive", p.exhaustive}, {"tuples", p.tuples}, {"types", p.counts.size()},
                     {"counts", p.counts}});
    return kExitOk;
  }
  ctx.out << "k=" << p.k << " exhaustive=" << (p.exhaustive ? "yes" : "no") << " tuples=" << p.tuples
          << " types=" << p.counts.size() << "\n";
  for (const auto& [type, count] : p.counts) ctx.out << "  " << type << " " << count << "\n";
  return kExitOk;
}

int cameron(Context& ctx, std::size_t size, std::uint64_t seed) {
  const CameronResult r = cameron_enumeration(size, seed);
  const auto faithful = static_cast<std::size_t>(
      std::count_if(r.sweep.begin(), r.sweep.end(), [](const CameronInstance& c) { return c.faithful; }));
  if (ctx.json) {
    json sweep = json::array();
    for (const auto& c : r.sweep) {
      std::vector<std::string> segments;
      for (SegmentRelation s : c.segments) segments.push_back(to_string(s));
      sweep.push_back({{"chain", c.chain},
                       {"segments", segments},
                       {"faithful", c.faithful},
                       {"profile_class", c.profile_class ? json(*c.profile_class) : json(nullptr)}});
    }
    json profiles = json::array();
    for (const auto& p : r.profiles) profiles.push_back(p.support());
    print_json(ctx, {{"sample_size", size}, {"sweep", sweep}, {"faithful", faithful}, {"profiles", profiles}});
    return kExitOk;
  }
  for (const auto& c : r.sweep) {
    ctx.out << "chain " << c.chain << " segments";
    for (SegmentRelation s : c.segments) ctx.out << " " << to_string(s);
    ctx.out << (c.faithful ? " faithful" : " collapses");
    if (c.profile_class) ctx.out << " profile " << *c.profile_class;
    ctx.out << "\n";
  }
  ctx.out << "faithful: " << faithful << "\nprofiles: " << r.profiles.size() << "\n";
  return kExitOk;
}

int replay_cmd(Context& ctx, const std::string& file) {
  const ReplayResult r = replay(file);
  if (ctx.json) {
    json outputs = json::array();
    for (const auto& [path, recorded, replayed] : r.outputs) {
      outputs.push_back({{"path", path}, {"recorded", recorded}, {"replayed", replayed}});
    }
    print_json(ctx, {{"changed_inputs", r.changed_inputs}, {"outputs", outputs}, {"reproduced", r.reproduced()}});
  } else {
    for (const auto& path : r.changed_inputs) ctx.out << "input changed: " << path << "\n";
    for (const auto& [path, recorded, replayed] : r.outputs) {
      ctx.out << (recorded == replayed ? "identical " : "differs ") << path << " " << replayed << "\n";
    }
    ctx.out << (r.reproduced() ? "ok: reproduced\n" : "failed: not reproduced\n");
  }
  return r.reproduced() ? kExitOk : kExitInvalid;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  std::function<int()> action;

  CLI::App app{"Finite distributive lattices, lattice-valued ultrametric spaces and permutation structures",
               "permlat"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->add_flag("--json", ctx.json, "Machine-readable report on standard output");
    return sub;
  };

  std::string file, file2, file3, out_path, at;
  std::size_t max_size = 6, k = 2, lo = 0, hi = 1, index = 0, samples = 20000, size = 40;
  std::uint64_t seed = 0;
  bool all = false;
  GenFlags gen_flags;
  EncodeFlags encode_flags;

  CLI::App* lattice = app.add_subcommand("lattice", "Finite lattices");
  lattice->require_subcommand(1);
  CLI::App* l_check = leaf(lattice, "check", "Check that a lattice file is a distributive lattice");
  l_check->add_option("FILE", file, "Lattice file")->required();
  l_check->callback([&] { action = [&] { return lattice_check(ctx, file); }; });
  CLI::App* l_bounds = leaf(lattice, "bounds", "Bounds on the number of linear orders needed");
  l_bounds->add_option("FILE", file, "Lattice file")->required();
  l_bounds->callback([&] { action = [&] { return lattice_bounds(ctx, file); }; });
  CLI::App* l_enum = leaf(lattice, "enum", "Enumerate lattices up to isomorphism");
  l_enum->add_option("--max", max_size, "Largest lattice size")->check(CLI::Range(2, 8));
  l_enum->add_flag("--all", all, "Include non-distributive lattices");
  l_enum->callback([&] { action = [&] { return lattice_enum(ctx, max_size, all); }; });

  CLI::App* space = app.add_subcommand("space", "Lattice-valued ultrametric spaces");
  space->require_subcommand(1);
  CLI::App* s_check = leaf(space, "check", "Validate a space file");
  s_check->add_option("FILE", file, "Space file")->required();
  s_check->callback([&] { action = [&] { return space_check(ctx, file); }; });
  CLI::App* s_amalgam = leaf(space, "amalgam", "Canonical amalgam of two spaces over a common subspace");
  s_amalgam->add_option("BASE", file, "Base space")->required();
  s_amalgam->add_option("F1", file2, "First factor")->required();
  s_amalgam->add_option("F2", file3, "Second factor")->required();
  s_amalgam->add_option("--out", out_path, "Output file (default: standard output)");
  s_amalgam->callback([&] { action = [&] { return space_amalgam(ctx, file, file2, file3, out_path); }; });
  CLI::App* s_probe = leaf(space, "probe", "Search small instances for an amalgamation failure");
  s_probe->add_option("LATTICE", file, "Lattice file")->required();
  s_probe->callback([&] { action = [&] { return space_probe(ctx, file); }; });

  CLI::App* sq = app.add_subcommand("sq", "Subquotient orders");
  sq->require_subcommand(1);
  CLI::App* q_check = leaf(sq, "check", "Validate the orders of a structure file");
  q_check->add_option("FILE", file, "Structure file")->required();
  q_check->callback([&] { action = [&] { return sq_check(ctx, file); }; });
  CLI::App* q_compose = leaf(sq, "compose", "Lexicographic composition of two orders");
  q_compose->add_option("FILE", file, "Structure file")->required();
  q_compose->add_option("--lo", lo, "Index of the lower order")->required();
  q_compose->add_option("--hi", hi, "Index of the upper order")->required();
  q_compose->add_option("--out", out_path, "Output file (default: standard output)");
  q_compose->callback([&] { action = [&] { return sq_compose(ctx, file, lo, hi, out_path); }; });
  CLI::App* q_split = leaf(sq, "split", "Split an order at a convex element");
  q_split->add_option("FILE", file, "Structure file")->required();
  q_split->add_option("--order", index, "Index of the order")->required();
  q_split->add_option("--at", at, "Lattice element to split at")->required();
  q_split->add_option("--out", out_path, "Output file (default: standard output)");
  q_split->callback([&] { action = [&] { return sq_split(ctx, file, index, at, out_path); }; });

  CLI::App* g = leaf(&app, "gen", "Generate a finite approximation of a generic structure");
  g->add_option("--lattice", gen_flags.lattice, "Lattice file")->required();
  g->add_option("--orders", gen_flags.orders, "BOTTOM:TOP[,BOTTOM:TOP...] or catalog")
      ->check([](const std::string& spec) { return check_signature_grammar(spec); });
  g->add_option("--size", gen_flags.size, "Number of points")->check(CLI::PositiveNumber);
  g->add_option("--depth", gen_flags.depth, "Saturation depth");
  g->add_option("--seed", gen_flags.seed, "Random seed");
  g->add_option("--out", gen_flags.out, "Output file; a manifest is written next to it");
  g->callback([&] { action = [&] { return gen(ctx, gen_flags); }; });

  CLI::App* check = app.add_subcommand("check", "Saturation checks on a structure file");
  check->require_subcommand(1);
  CLI::App* c_ext = leaf(check, "ext", "Extension property for subsets of size <= K");
  c_ext->add_option("--in", file, "Structure file")->required();
  c_ext->add_option("--k", k, "Subset size")->required();
  c_ext->callback([&] { action = [&] { return check_ext(ctx, file, k); }; });
  CLI::App* c_hom = leaf(check, "hom", "Homogeneity for tuples of size <= K");
  c_hom->add_option("--in", file, "Structure file")->required();
  c_hom->add_option("--k", k, "Tuple size")->required();
  c_hom->callback([&] { action = [&] { return check_hom(ctx, file, k); }; });

  CLI::App* e = leaf(&app, "encode", "Encode a structure as a tuple of linear orders");
  e->add_option("--in", encode_flags.in, "Structure file")->required();
  e->add_option("--cover", encode_flags.cover, "auto or a chain cover file");
  e->add_option("--seed", encode_flags.seed, "Random seed (recorded in the manifest)");
  e->add_option("--out", encode_flags.out, "Output file; codebook and manifest are written next to it");
  e->callback([&] { action = [&] { return encode(ctx, encode_flags); }; });

  CLI::App* d = leaf(&app, "decode", "Recover the definable equivalence relations");
  d->add_option("--in", file, "Permutation structure file")->required();
  d->callback([&] { action = [&] { return decode(ctx, file); }; });

  CLI::App* p = leaf(&app, "profile", "Counts of k-point types");
  p->add_option("--in", file, "Permutation structure file")->required();
  p->add_option("--k", k, "Tuple size")->required()->check(CLI::Range(1, 10));
  p->add_option("--samples", samples, "Sampled tuples when k > 4");
  p->add_option("--seed", seed, "Random seed for sampling");
  p->callback([&] { action = [&] { return profile_cmd(ctx, file, k, samples, seed); }; });

  CLI::App* c = leaf(&app, "cameron", "Two-order presentations over the 2- and 3-chain");
  c->add_option("--size", size, "Sample size")->check(CLI::PositiveNumber);
  c->add_option("--seed", seed, "Random seed");
  c->callback([&] { action = [&] { return cameron(ctx, size, seed); }; });

  CLI::App* r = leaf(&app, "replay", "Recompute the artifacts of a manifest and compare digests");
  r->add_option("MANIFEST", file, "Manifest file")->required();
  r->callback([&] { action = [&] { return replay_cmd(ctx, file); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      app.exit(ex, out, err);
      return kExitOk;
    }
    // A missing requirement can mask an unknown flag or subcommand; name the
    // unknown argument first.
    const std::vector<std::string> extras = app.remaining(true);
    if (!extras.empty()) {
      err << "unexpected argument: " << extras.front() << "\nRun with --help for more information.\n";
      return kExitUsage;
    }
    app.exit(ex, out, err);
    return kExitUsage;
  }

  if (!action) return kExitUsage;
  try {
    return action();
  } catch (const Error& ex) {
    if (ctx.json) {
      print_json(ctx, {{"error", {{"code", std::string(to_string(ex.code()))}, {"message", ex.what()}}}});
    } else {
      err << "error: " << to_string(ex.code()) << ": " << ex.what() << "\n";
    }
    return kExitInvalid;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace permlat::cli
