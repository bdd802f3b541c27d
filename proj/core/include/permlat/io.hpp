#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "permlat/lattice.hpp"
#include "permlat/perm.hpp"
#include "permlat/sqorder.hpp"
#include "permlat/ultrametric.hpp"

// Text formats. Blank lines and lines starting with '#' are ignored
// everywhere. Parse failures throw Error(kParse) with the 1-based line
// number in the message; file access failures throw Error(kIo).
namespace permlat::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Lattice file:
///   elements: 0 a b 1
///   cover: 0 < a
/// The result is only a poset; lattice axioms are checked separately.
FinitePoset parse_poset(std::string_view text);
std::string format_lattice(const FinitePoset& poset);

/// parse_poset plus validate_lattice; throws kInvalidLattice with the first
/// violation.
FiniteLattice parse_lattice(std::string_view text);
FiniteLattice load_lattice(const std::filesystem::path& path);

/// Value of the `lattice:` header of a space or structure file.
std::string lattice_reference(std::string_view text);

/// The header of `text`, read from `file`, resolved against the file's
/// directory when relative.
std::filesystem::path resolve_lattice(const std::filesystem::path& file, std::string_view text);

/// Space file, optionally followed by order blocks:
///   lattice: chain3.lat
///   points: 0 1 2
///   d: 0 1 a            (every unordered pair of distinct points once)
///   sq: a 1
///   rank: 0 0           (one line per bottom class: any point of it, rank)
/// The header is not resolved here; the caller supplies the lattice.
OrderedLambdaStructure parse_structure(std::string_view text, const LatticeRef& lattice);

/// Writes points in position order, pairs (i, j) with i < j, and per order
/// one rank line per bottom class keyed by its first point.
std::string format_structure(const OrderedLambdaStructure& s, std::string_view lattice_path);
std::string format_space(const LambdaSpace& space, std::string_view lattice_path);

/// Loads the structure and the lattice its header names, resolved relative
/// to the file's directory.
OrderedLambdaStructure load_structure(const std::filesystem::path& path);

/// Permutation structure file: `n N` then one line per point with its rank
/// in each of the N orders.
PermStructure parse_perm(std::string_view text);
std::string format_perm(const PermStructure& p);

/// Chain cover file: one `chain: a b c` line per chain, bottom to top.
ChainCover parse_cover(std::string_view text, const FiniteLattice& lattice);
std::string format_cover(const ChainCover& cover, const FiniteLattice& lattice);

}  // namespace permlat::io
