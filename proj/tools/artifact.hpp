#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "permlat/generic.hpp"
#include "permlat/perm.hpp"

namespace permlat::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);

/// `BOTTOM:TOP[,BOTTOM:TOP...]` or `catalog`. Returns an error message for a
/// malformed spec, empty when the grammar is fine.
std::string check_signature_grammar(std::string_view spec);

/// Throws kInvalidSignature for element names the lattice does not have.
std::vector<OrderSpec> parse_signature(std::string_view spec, const FiniteLattice& lattice);

struct GenRequest {
  std::filesystem::path lattice;
  /// Written as the structure's `lattice:` header.
  std::string lattice_header;
  std::string orders = "catalog";
  std::size_t size = 40;
  std::size_t depth = 2;
  std::uint64_t seed = 0;
};

struct GenOutput {
  std::string text;
  GenerationResult result;
};

GenOutput run_gen(const GenRequest& request);

struct EncodeRequest {
  std::filesystem::path in;
  /// Empty for the optimal cover.
  std::filesystem::path cover;
  std::uint64_t seed = 0;
};

struct EncodeOutput {
  std::string perm_text;
  std::string codebook_text;
  EncodeResult result;
  /// Files the output depends on: the structure, its lattice and the cover.
  std::vector<std::filesystem::path> inputs;
};

EncodeOutput run_encode(const EncodeRequest& request);

nlohmann::json codebook_json(const EncodeResult& result, const FiniteLattice& lattice);

/// A manifest records paths relative to its own directory, so a directory of
/// artifacts can be moved and replayed.
struct Manifest {
  std::string command;
  nlohmann::json config;
  /// (relative path, digest) pairs.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;

  std::string text() const;
};

Manifest read_manifest(const std::filesystem::path& path);

struct ReplayResult {
  std::vector<std::string> changed_inputs;
  /// (relative path, recorded digest, replayed digest).
  std::vector<std::tuple<std::string, std::string, std::string>> outputs;

  bool reproduced() const;
};

/// Recomputes the artifacts of a gen or encode manifest without touching
/// the recorded files.
ReplayResult replay(const std::filesystem::path& manifest_path);

/// Path of `target` relative to `base_dir`, with forward slashes.
std::string relative_to(const std::filesystem::path& target, const std::filesystem::path& base_dir);

}  // namespace permlat::cli
