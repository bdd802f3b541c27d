#include "artifact.hpp"

#include <openssl/evp.h>

#include <map>
#include <optional>

#include "permlat/io.hpp"

namespace permlat::cli {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

std::string to_string(OrderRole role) {
  switch (role) {
    case OrderRole::kBase: return "base";
    case OrderRole::kCompanion: return "companion";
    case OrderRole::kStandalone: return "standalone";
  }
  return "unknown";
}

std::string file_digest(const std::filesystem::path& path) { return sha256_hex(io::read_file(path)); }

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string check_signature_grammar(std::string_view spec) {
  if (spec == "catalog") return {};
  if (spec.empty()) return "empty order signature";
  for (std::string_view pair : split(spec, ',')) {
    const auto parts = split(pair, ':');
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
      return "expected BOTTOM:TOP, got '" + std::string(pair) + "'";
    }
  }
  return {};
}

std::vector<OrderSpec> parse_signature(std::string_view spec, const FiniteLattice& lattice) {
  if (spec == "catalog") return catalog_signature(lattice);
  if (const std::string problem = check_signature_grammar(spec); !problem.empty()) {
    throw Error(ErrorCode::kInvalidSignature, problem);
  }
  std::vector<OrderSpec> signature;
  for (std::string_view pair : split(spec, ',')) {
    const auto parts = split(pair, ':');
    const auto bottom = lattice.find(parts[0]);
    const auto top = lattice.find(parts[1]);
    if (!bottom || !top) {
      throw Error(ErrorCode::kInvalidSignature, "unknown lattice element in '" + std::string(pair) + "'");
    }
    signature.push_back({*bottom, *top});
  }
  return signature;
}

GenOutput run_gen(const GenRequest& request) {
  const LatticeRef lattice = share(io::load_lattice(request.lattice));
  const std::vector<OrderSpec> signature = parse_signature(request.orders, *lattice);
  GenerationResult result = generate_generic(lattice, signature, {request.seed, request.size, request.depth});
  std::string text = io::format_structure(result.structure, request.lattice_header);
  return {std::move(text), std::move(result)};
}

nlohmann::json codebook_json(const EncodeResult& result, const FiniteLattice& lattice) {
  using nlohmann::json;
  const Codebook& book = result.codebook;
  json emitted = json::array();
  for (const EmittedOrder& e : book.emitted) {
    emitted.push_back({{"role", to_string(e.role)}, {"owner", e.owner}, {"bit", e.bit}});
  }
  json relations = json::array();
  for (std::size_t l = 0; l < book.relations.size(); ++l) {
    relations.push_back({{"element", lattice.name(static_cast<Elem>(l))}, {"orientations", book.relations[l]}});
  }
  json orders = json::array();
  for (const OrientationSet& o : book.orders) orders.push_back({{"orientations", o}});
  json cover = json::array();
  for (const auto& chain : result.cover.chains) {
    json names = json::array();
    for (Elem e : chain) names.push_back(lattice.name(e));
    cover.push_back(names);
  }
  return {{"dimension", book.dimension}, {"bound", result.bound}, {"cover", cover},
          {"emitted", emitted},          {"relations", relations}, {"orders", orders}};
}

EncodeOutput run_encode(const EncodeRequest& request) {
  const std::string text = io::read_file(request.in);
  const std::filesystem::path lattice_path = io::resolve_lattice(request.in, text);
  const OrderedLambdaStructure s = io::parse_structure(text, share(io::load_lattice(lattice_path)));
  const ValidationReport report = validate_structure(s);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    std::string detail = v.kind;
    for (const auto& w : v.witness) detail += " " + w;
    throw Error(ErrorCode::kInvalidOrder, "input structure is invalid: " + detail);
  }
  std::optional<ChainCover> cover;
  std::vector<std::filesystem::path> inputs{request.in, lattice_path};
  if (!request.cover.empty()) {
    cover = io::parse_cover(io::read_file(request.cover), s.space.lattice());
    inputs.push_back(request.cover);
  }
  EncodeResult result = encode_orders(s, cover);
  EncodeOutput out;
  out.perm_text = io::format_perm(result.perm);
  out.codebook_text = codebook_json(result, s.space.lattice()).dump(2) + "\n";
  out.result = std::move(result);
  out.inputs = std::move(inputs);
  return out;
}

std::string Manifest::text() const {
  nlohmann::json in = nlohmann::json::object();
  for (const auto& [path, digest] : inputs) in[path] = digest;
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [path, digest] : outputs) out[path] = digest;
  const nlohmann::json doc = {{"command", command},
                              {"config", config},
                              {"inputs", in},
                              {"outputs", out},
                              {"tool_version", kToolVersion}};
  return doc.dump(2) + "\n";
}

Manifest read_manifest(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(io::read_file(path));
    Manifest m;
    m.command = doc.at("command").get<std::string>();
    m.config = doc.at("config");
    for (const auto& [key, value] : doc.at("inputs").items()) m.inputs.emplace_back(key, value.get<std::string>());
    for (const auto& [key, value] : doc.at("outputs").items()) m.outputs.emplace_back(key, value.get<std::string>());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

bool ReplayResult::reproduced() const {
  if (!changed_inputs.empty() || outputs.empty()) return false;
  for (const auto& [path, recorded, replayed] : outputs) {
    if (recorded != replayed) return false;
  }
  return true;
}

ReplayResult replay(const std::filesystem::path& manifest_path) {
  const Manifest m = read_manifest(manifest_path);
  const std::filesystem::path dir = manifest_path.parent_path();
  ReplayResult result;
  for (const auto& [path, digest] : m.inputs) {
    if (file_digest(dir / path) != digest) result.changed_inputs.push_back(path);
  }

  std::map<std::string, std::string> replayed;
  try {
    const nlohmann::json& c = m.config;
    if (m.command == "gen") {
      GenRequest req;
      req.lattice_header = c.at("lattice").get<std::string>();
      req.lattice = dir / req.lattice_header;
      req.orders = c.at("orders").get<std::string>();
      req.size = c.at("size").get<std::size_t>();
      req.depth = c.at("depth").get<std::size_t>();
      req.seed = c.at("seed").get<std::uint64_t>();
      replayed[c.at("out").get<std::string>()] = sha256_hex(run_gen(req).text);
    } else if (m.command == "encode") {
      EncodeRequest req;
      req.in = dir / c.at("in").get<std::string>();
      const std::string cover = c.at("cover").get<std::string>();
      if (cover != "auto") req.cover = dir / cover;
      req.seed = c.at("seed").get<std::uint64_t>();
      const EncodeOutput out = run_encode(req);
      const std::string name = c.at("out").get<std::string>();
      replayed[name] = sha256_hex(out.perm_text);
      replayed[name + ".codebook.json"] = sha256_hex(out.codebook_text);
    } else {
      throw Error(ErrorCode::kParse, "cannot replay command '" + m.command + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, manifest_path.string() + ": " + e.what());
  }

  for (const auto& [path, digest] : m.outputs) {
    const auto it = replayed.find(path);
    result.outputs.emplace_back(path, digest, it == replayed.end() ? std::string() : it->second);
  }
  return result;
}

std::string relative_to(const std::filesystem::path& target, const std::filesystem::path& base_dir) {
  const std::filesystem::path base = base_dir.empty() ? std::filesystem::current_path() : base_dir;
  return std::filesystem::proximate(std::filesystem::absolute(target), std::filesystem::absolute(base))
      .generic_string();
}

}  // namespace permlat::cli
