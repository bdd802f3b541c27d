#include "permlat/lattice.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <set>

namespace permlat {
namespace {

ElemMask bit(std::size_t i) { return ElemMask{1} << i; }

void require_size(std::size_t n) {
  if (n == 0 || n > kMaxLatticeSize) {
    throw Error(ErrorCode::kSizeCapExceeded,
                "poset size " + std::to_string(n) + " outside 1.." + std::to_string(kMaxLatticeSize));
  }
}

// Bottom is "0", top is "1", everything else gets a letter in index order.
std::vector<std::string> standard_names(const std::vector<ElemMask>& up) {
  const std::size_t n = up.size();
  std::vector<std::string> names(n);
  std::size_t letter = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_bottom = std::popcount(up[i]) == static_cast<int>(n);
    bool is_top = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (!((up[j] >> i) & 1U)) is_top = false;
    }
    if (is_bottom && n > 1) {
      names[i] = "0";
    } else if (is_top && n > 1) {
      names[i] = "1";
    } else if (letter < 26) {
      names[i] = std::string(1, static_cast<char>('a' + letter++));
    } else {
      names[i] = "x" + std::to_string(letter++);
    }
  }
  return names;
}

std::string ename(const FinitePoset& p, Elem a) { return p.name(a); }

}  // namespace

// ---------------------------------------------------------------------------
// FinitePoset

FinitePoset FinitePoset::from_up_sets(std::vector<std::string> names, std::vector<ElemMask> up) {
  require_size(names.size());
  if (up.size() != names.size()) {
    throw Error(ErrorCode::kInvalidLattice, "up-set table does not match element count");
  }
  FinitePoset p;
  const std::size_t n = names.size();
  p.names_ = std::move(names);
  p.up_ = std::move(up);
  p.down_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if ((p.up_[a] >> b) & 1U) p.down_[b] |= bit(a);
    }
  }
  return p;
}

FinitePoset FinitePoset::from_covers(std::vector<std::string> names,
                                     std::span<const std::pair<Elem, Elem>> covers) {
  require_size(names.size());
  const std::size_t n = names.size();
  std::vector<ElemMask> up(n, 0);
  for (std::size_t a = 0; a < n; ++a) up[a] = bit(a);
  for (const auto& [lo, hi] : covers) {
    if (lo >= n || hi >= n) throw Error(ErrorCode::kInvalidLattice, "cover references unknown element");
    up[lo] |= bit(hi);
  }
  // Warshall closure on bitmask rows.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      if ((up[a] >> k) & 1U) up[a] |= up[k];
    }
  }
  return from_up_sets(std::move(names), std::move(up));
}

std::optional<Elem> FinitePoset::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Elem>(i);
  }
  return std::nullopt;
}

ElemMask FinitePoset::all() const {
  return size() == 64 ? ~ElemMask{0} : bit(size()) - 1;
}

std::vector<Elem> FinitePoset::upper_covers(Elem a) const {
  std::vector<Elem> out;
  const ElemMask strict_up = up_[a] & ~bit(a);
  for (std::size_t b = 0; b < size(); ++b) {
    if (!((strict_up >> b) & 1U)) continue;
    // b covers a iff nothing lies strictly between.
    const ElemMask between = strict_up & down_[b] & ~bit(b);
    if (between == 0) out.push_back(static_cast<Elem>(b));
  }
  return out;
}

std::vector<Elem> FinitePoset::lower_covers(Elem a) const {
  std::vector<Elem> out;
  const ElemMask strict_down = down_[a] & ~bit(a);
  for (std::size_t b = 0; b < size(); ++b) {
    if (!((strict_down >> b) & 1U)) continue;
    const ElemMask between = strict_down & up_[b] & ~bit(b);
    if (between == 0) out.push_back(static_cast<Elem>(b));
  }
  return out;
}

std::vector<std::pair<Elem, Elem>> FinitePoset::hasse_edges() const {
  std::vector<std::pair<Elem, Elem>> edges;
  for (std::size_t a = 0; a < size(); ++a) {
    for (Elem b : upper_covers(static_cast<Elem>(a))) edges.emplace_back(static_cast<Elem>(a), b);
  }
  return edges;
}

FinitePoset FinitePoset::induced(std::span<const Elem> elements) const {
  std::vector<std::string> names;
  std::vector<ElemMask> up(elements.size(), 0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    names.push_back(names_[elements[i]]);
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (leq(elements[i], elements[j])) up[i] |= bit(j);
    }
  }
  return from_up_sets(std::move(names), std::move(up));
}

ValidationReport validate_poset(const FinitePoset& p) {
  ValidationReport report;
  const std::size_t n = p.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!p.leq(a, a)) report.add("not_reflexive", {ename(p, a)});
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (p.leq(a, b) && p.leq(b, a)) report.add("not_antisymmetric", {ename(p, a), ename(p, b)});
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!p.leq(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (p.leq(b, c) && !p.leq(a, c)) {
          report.add("not_transitive", {ename(p, a), ename(p, b), ename(p, c)});
        }
      }
    }
  }
  return report;
}

namespace {

// Greatest element of `candidates` under p, if one exists.
std::optional<Elem> greatest(const FinitePoset& p, ElemMask candidates) {
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (((candidates >> x) & 1U) && (p.down_set(x) & candidates) == candidates) return static_cast<Elem>(x);
  }
  return std::nullopt;
}

std::optional<Elem> least(const FinitePoset& p, ElemMask candidates) {
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (((candidates >> x) & 1U) && (p.up_set(x) & candidates) == candidates) return static_cast<Elem>(x);
  }
  return std::nullopt;
}

}  // namespace

ValidationReport validate_lattice(const FinitePoset& candidate) {
  ValidationReport report = validate_poset(candidate);
  if (!report.ok()) return report;
  const std::size_t n = candidate.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const ElemMask lower = candidate.down_set(a) & candidate.down_set(b);
      const ElemMask upper = candidate.up_set(a) & candidate.up_set(b);
      if (upper == 0) {
        report.add("missing_upper_bound", {ename(candidate, a), ename(candidate, b)});
      } else if (!least(candidate, upper)) {
        report.add("missing_least_upper_bound", {ename(candidate, a), ename(candidate, b)});
      }
      if (lower == 0) {
        report.add("missing_lower_bound", {ename(candidate, a), ename(candidate, b)});
      } else if (!greatest(candidate, lower)) {
        report.add("missing_greatest_lower_bound", {ename(candidate, a), ename(candidate, b)});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// FiniteLattice

FiniteLattice FiniteLattice::from_poset(FinitePoset poset) {
  const ValidationReport report = validate_lattice(poset);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    std::string witness;
    for (const auto& w : v.witness) witness += (witness.empty() ? "" : " ") + w;
    throw Error(ErrorCode::kInvalidLattice, v.kind + " (" + witness + ")");
  }
  const std::size_t n = poset.size();
  std::vector<Elem> meet(n * n);
  std::vector<Elem> join(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      meet[a * n + b] = *greatest(poset, poset.down_set(a) & poset.down_set(b));
      join[a * n + b] = *least(poset, poset.up_set(a) & poset.up_set(b));
    }
  }
  const Elem bottom = *least(poset, poset.all());
  const Elem top = *greatest(poset, poset.all());
  return from_tables(std::move(poset), std::move(meet), std::move(join), bottom, top);
}

FiniteLattice FiniteLattice::from_tables(FinitePoset poset, std::vector<Elem> meet, std::vector<Elem> join,
                                         Elem bottom, Elem top) {
  FiniteLattice lat;
  lat.poset_ = std::move(poset);
  lat.meet_ = std::move(meet);
  lat.join_ = std::move(join);
  lat.bottom_ = bottom;
  lat.top_ = top;
  return lat;
}

Elem FiniteLattice::meet_all(ElemMask elements) const {
  Elem acc = top_;
  for (std::size_t i = 0; i < size(); ++i) {
    if ((elements >> i) & 1U) acc = meet(acc, static_cast<Elem>(i));
  }
  return acc;
}

Elem FiniteLattice::join_all(ElemMask elements) const {
  Elem acc = bottom_;
  for (std::size_t i = 0; i < size(); ++i) {
    if ((elements >> i) & 1U) acc = join(acc, static_cast<Elem>(i));
  }
  return acc;
}

ValidationReport validate_lattice(const FiniteLattice& lat) {
  ValidationReport report = validate_lattice(lat.poset());
  if (!report.ok()) return report;
  const FinitePoset& p = lat.poset();
  const std::size_t n = lat.size();
  auto nm = [&](std::size_t x) { return p.name(static_cast<Elem>(x)); };
  for (std::size_t x = 0; x < n; ++x) {
    if (!p.leq(lat.bottom(), x)) report.add("bottom_not_least", {nm(lat.bottom()), nm(x)});
    if (!p.leq(x, lat.top())) report.add("top_not_greatest", {nm(x), nm(lat.top())});
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Elem m = lat.meet(a, b);
      const Elem j = lat.join(a, b);
      if (m >= n || m != *greatest(p, p.down_set(a) & p.down_set(b))) {
        report.add("meet_not_glb", {nm(a), nm(b)});
      }
      if (j >= n || j != *least(p, p.up_set(a) & p.up_set(b))) {
        report.add("join_not_lub", {nm(a), nm(b)});
      }
    }
  }
  if (!report.ok()) return report;
  for (std::size_t a = 0; a < n; ++a) {
    if (lat.meet(a, a) != a || lat.join(a, a) != a) report.add("not_idempotent", {nm(a)});
    for (std::size_t b = 0; b < n; ++b) {
      if (lat.meet(a, b) != lat.meet(b, a) || lat.join(a, b) != lat.join(b, a)) {
        report.add("not_commutative", {nm(a), nm(b)});
      }
      if (lat.meet(a, lat.join(a, b)) != a || lat.join(a, lat.meet(a, b)) != a) {
        report.add("not_absorbing", {nm(a), nm(b)});
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (lat.meet(lat.meet(a, b), c) != lat.meet(a, lat.meet(b, c)) ||
            lat.join(lat.join(a, b), c) != lat.join(a, lat.join(b, c))) {
          report.add("not_associative", {nm(a), nm(b), nm(c)});
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Distributivity

DistributivityResult is_distributive(const FiniteLattice& lat) {
  const std::size_t n = lat.size();
  std::array<Elem, 5> s{};
  auto in_subset = [&](Elem e) { return std::find(s.begin(), s.end(), e) != s.end(); };
  for (s[0] = 0; s[0] < n; ++s[0]) {
    for (s[1] = s[0] + 1; s[1] < n; ++s[1]) {
      for (s[2] = s[1] + 1; s[2] < n; ++s[2]) {
        for (s[3] = s[2] + 1; s[3] < n; ++s[3]) {
          for (s[4] = s[3] + 1; s[4] < n; ++s[4]) {
            bool sublattice = true;
            for (std::size_t i = 0; i < 5 && sublattice; ++i) {
              for (std::size_t j = i + 1; j < 5; ++j) {
                if (!in_subset(lat.meet(s[i], s[j])) || !in_subset(lat.join(s[i], s[j]))) {
                  sublattice = false;
                  break;
                }
              }
            }
            if (!sublattice) continue;
            // A closed 5-subset has its own bottom and top; classify the
            // three middle elements by how many pairs are comparable.
            const Elem lo = lat.meet_all(bit(s[0]) | bit(s[1]) | bit(s[2]) | bit(s[3]) | bit(s[4]));
            const Elem hi = lat.join_all(bit(s[0]) | bit(s[1]) | bit(s[2]) | bit(s[3]) | bit(s[4]));
            std::vector<Elem> middle;
            for (Elem e : s) {
              if (e != lo && e != hi) middle.push_back(e);
            }
            int comparable_pairs = 0;
            for (std::size_t i = 0; i < 3; ++i) {
              for (std::size_t j = i + 1; j < 3; ++j) {
                if (lat.poset().comparable(middle[i], middle[j])) ++comparable_pairs;
              }
            }
            if (comparable_pairs == 0) return {false, DistributivityWitness{ForbiddenSublattice::kM3, s}};
            if (comparable_pairs == 1) return {false, DistributivityWitness{ForbiddenSublattice::kN5, s}};
          }
        }
      }
    }
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Meet-irreducibles, chain covers, bounds

bool is_meet_irreducible(const FiniteLattice& lat, Elem x) {
  return x != lat.top() && lat.poset().upper_covers(x).size() == 1;
}

MeetIrreducibles meet_irreducibles(const FiniteLattice& lat) {
  MeetIrreducibles out;
  out.cover.assign(lat.size(), std::nullopt);
  for (std::size_t x = 0; x < lat.size(); ++x) {
    const auto covers = lat.poset().upper_covers(static_cast<Elem>(x));
    if (x != lat.top() && covers.size() == 1) {
      out.elements.push_back(static_cast<Elem>(x));
      out.cover[x] = covers.front();
    }
  }
  return out;
}

IrreducibleCore irreducible_core(const FiniteLattice& lat) {
  IrreducibleCore core;
  for (Elem x : meet_irreducibles(lat).elements) {
    if (x != lat.bottom() && x != lat.top()) core.to_lattice.push_back(x);
  }
  if (core.to_lattice.empty()) return core;
  core.poset = lat.poset().induced(core.to_lattice);
  return core;
}

ChainCover min_chain_cover(const FinitePoset& p) {
  const std::size_t n = p.size();
  // Left copy u matched to right copy v means v follows u in its chain.
  std::vector<int> match_right(n, -1);  // right v -> left u
  std::vector<int> match_left(n, -1);   // left u -> right v
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t u, std::vector<bool>& seen) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!p.lt(u, v) || seen[v]) continue;
      seen[v] = true;
      if (match_right[v] < 0 || augment(static_cast<std::size_t>(match_right[v]), seen)) {
        match_right[v] = static_cast<int>(u);
        match_left[u] = static_cast<int>(v);
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<bool> seen(n, false);
    augment(u, seen);
  }
  ChainCover cover;
  for (std::size_t start = 0; start < n; ++start) {
    if (match_right[start] >= 0) continue;  // not a chain head
    std::vector<Elem> chain;
    for (int cur = static_cast<int>(start); cur >= 0; cur = match_left[cur]) {
      chain.push_back(static_cast<Elem>(cur));
    }
    cover.chains.push_back(std::move(chain));
  }
  return cover;
}

int ceil_log2(std::size_t n) {
  int b = 0;
  while ((std::size_t{1} << b) < n) ++b;
  return b;
}

int cover_cost(const ChainCover& cover) {
  int cost = static_cast<int>(cover.chains.size());
  for (const auto& chain : cover.chains) cost += ceil_log2(chain.size() + 1);
  return cost;
}

DimensionBounds dimension_bounds(const FiniteLattice& lat) {
  if (!is_distributive(lat).distributive) {
    throw Error(ErrorCode::kNonDistributive, "dimension bounds need a distributive lattice");
  }
  DimensionBounds bounds;
  const IrreducibleCore core = irreducible_core(lat);
  const std::size_t m = core.to_lattice.size();
  if (m == 0) {
    bounds.note = "no meet-irreducibles besides bottom and top; the bounds concern the lattice only and "
                  "presenting a structure with ordered points still takes at least one order";
    return bounds;
  }
  const ChainCover dilworth = min_chain_cover(core.poset);
  bounds.width = static_cast<int>(dilworth.chains.size());
  bounds.lower = 2 * bounds.width;

  ChainCover best;
  if (m <= kExhaustiveCoverLimit) {
    // Minimise over all partitions into chains; overlapping covers never
    // cost less since dropping repeated elements keeps chains chains.
    const std::size_t full = (std::size_t{1} << m) - 1;
    std::vector<bool> is_chain(full + 1, true);
    std::vector<int> chain_cost(full + 1, 0);
    for (std::size_t s = 1; s <= full; ++s) {
      const int low = std::countr_zero(s);
      const std::size_t rest = s & (s - 1);
      bool ok = is_chain[rest];
      for (std::size_t j = 0; ok && j < m; ++j) {
        if (((rest >> j) & 1U) && !core.poset.comparable(low, j)) ok = false;
      }
      is_chain[s] = ok;
      chain_cost[s] = 1 + ceil_log2(std::popcount(s) + 1);
    }
    constexpr int kInf = std::numeric_limits<int>::max() / 2;
    std::vector<int> f(full + 1, kInf);
    std::vector<std::size_t> pick(full + 1, 0);
    f[0] = 0;
    for (std::size_t s = 1; s <= full; ++s) {
      const std::size_t low = s & (~s + 1);
      const std::size_t others = s & ~low;
      // Enumerate chains C with low in C and C subset of s.
      for (std::size_t sub = others;; sub = (sub - 1) & others) {
        const std::size_t c = sub | low;
        if (is_chain[c] && f[s & ~c] + chain_cost[c] < f[s]) {
          f[s] = f[s & ~c] + chain_cost[c];
          pick[s] = c;
        }
        if (sub == 0) break;
      }
    }
    for (std::size_t s = full; s != 0; s &= ~pick[s]) {
      std::vector<Elem> chain;
      for (std::size_t j = 0; j < m; ++j) {
        if ((pick[s] >> j) & 1U) chain.push_back(static_cast<Elem>(j));
      }
      best.chains.push_back(std::move(chain));
    }
  } else {
    best = dilworth;
    bounds.exhaustive = false;
    bounds.note = "upper bound evaluated on a minimum-cardinality cover only";
  }
  // Sort each chain bottom-up and translate to lattice ids.
  for (auto& chain : best.chains) {
    std::sort(chain.begin(), chain.end(), [&](Elem a, Elem b) { return core.poset.lt(a, b); });
    for (Elem& e : chain) e = core.to_lattice[e];
  }
  std::sort(best.chains.begin(), best.chains.end());
  bounds.upper = cover_cost(best);
  bounds.cover = std::move(best);
  return bounds;
}

// ---------------------------------------------------------------------------
// Construction and enumeration

FiniteLattice downset_lattice(const FinitePoset& p) {
  const std::size_t n = p.size();
  if (n > 20) throw Error(ErrorCode::kSizeCapExceeded, "downset lattice of a poset above 20 elements");
  std::vector<ElemMask> downsets;
  for (ElemMask d = 0; d < (ElemMask{1} << n); ++d) {
    bool closed = true;
    for (std::size_t x = 0; x < n && closed; ++x) {
      if (((d >> x) & 1U) && (p.down_set(x) & d) != p.down_set(x)) closed = false;
    }
    if (closed) downsets.push_back(d);
  }
  require_size(downsets.size());
  std::stable_sort(downsets.begin(), downsets.end(), [](ElemMask a, ElemMask b) {
    return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
  });
  const std::size_t m = downsets.size();
  std::vector<ElemMask> up(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if ((downsets[i] & downsets[j]) == downsets[i]) up[i] |= bit(j);
    }
  }
  auto names = standard_names(up);
  return FiniteLattice::from_poset(FinitePoset::from_up_sets(std::move(names), std::move(up)));
}

namespace {

// Number of downsets of the poset given by strict-down masks.
std::size_t count_downsets(const std::vector<ElemMask>& strict_down) {
  const std::size_t n = strict_down.size();
  std::size_t count = 0;
  for (ElemMask d = 0; d < (ElemMask{1} << n); ++d) {
    bool closed = true;
    for (std::size_t x = 0; x < n && closed; ++x) {
      if (((d >> x) & 1U) && (strict_down[x] & d) != strict_down[x]) closed = false;
    }
    if (closed) ++count;
  }
  return count;
}

// Naturally labelled posets: element k's strict down-set is a downset of
// elements 0..k-1. `keep_growing` prunes the search.
void for_each_natural_poset(std::size_t max_elements,
                            const std::function<bool(const std::vector<ElemMask>&)>& visit) {
  std::vector<ElemMask> strict_down;
  std::function<void()> rec = [&]() {
    if (!visit(strict_down)) return;
    if (strict_down.size() == max_elements) return;
    const std::size_t k = strict_down.size();
    for (ElemMask d = 0; d < (ElemMask{1} << k); ++d) {
      bool closed = true;
      for (std::size_t x = 0; x < k && closed; ++x) {
        if (((d >> x) & 1U) && (strict_down[x] & d) != strict_down[x]) closed = false;
      }
      if (!closed) continue;
      strict_down.push_back(d);
      rec();
      strict_down.pop_back();
    }
  };
  rec();
}

FinitePoset poset_from_strict_down(const std::vector<ElemMask>& strict_down) {
  const std::size_t n = strict_down.size();
  std::vector<ElemMask> up(n, 0);
  std::vector<std::string> names;
  for (std::size_t x = 0; x < n; ++x) {
    names.push_back("p" + std::to_string(x));
    up[x] |= bit(x);
    for (std::size_t y = 0; y < n; ++y) {
      if ((strict_down[x] >> y) & 1U) up[y] |= bit(x);
    }
  }
  return FinitePoset::from_up_sets(std::move(names), std::move(up));
}

}  // namespace

std::vector<FiniteLattice> enumerate_distributive_lattices(std::size_t max_size) {
  if (max_size > kMaxEnumerationSize) {
    throw Error(ErrorCode::kSizeCapExceeded,
                "distributive lattice enumeration is capped at " + std::to_string(kMaxEnumerationSize));
  }
  std::vector<FiniteLattice> out;
  std::set<std::vector<ElemMask>> seen;
  if (max_size < 2) return out;
  for_each_natural_poset(max_size - 1, [&](const std::vector<ElemMask>& strict_down) {
    if (strict_down.empty()) return true;
    const std::size_t count = count_downsets(strict_down);
    if (count > max_size) return false;  // adding elements only adds downsets
    FiniteLattice lat = downset_lattice(poset_from_strict_down(strict_down));
    if (seen.insert(canonical_form(lat.poset())).second) out.push_back(std::move(lat));
    return true;
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const FiniteLattice& a, const FiniteLattice& b) { return a.size() < b.size(); });
  return out;
}

std::vector<FiniteLattice> enumerate_lattices(std::size_t max_size) {
  if (max_size > kMaxEnumerationSize) {
    throw Error(ErrorCode::kSizeCapExceeded, "lattice enumeration is capped at " + std::to_string(kMaxEnumerationSize));
  }
  std::vector<FiniteLattice> out;
  if (max_size < 2) return out;
  std::set<std::vector<ElemMask>> seen;
  for_each_natural_poset(max_size - 2, [&](const std::vector<ElemMask>& inner) {
    // Bounded poset: element 0 below everything, last element above.
    const std::size_t k = inner.size();
    const std::size_t n = k + 2;
    std::vector<ElemMask> up(n, 0);
    up[0] = bit(n) - 1;
    up[n - 1] = bit(n - 1);
    for (std::size_t x = 0; x < k; ++x) {
      up[x + 1] |= bit(x + 1) | bit(n - 1);
      for (std::size_t y = 0; y < k; ++y) {
        if ((inner[x] >> y) & 1U) up[y + 1] |= bit(x + 1);
      }
    }
    // inner up-sets need transitive closure through x's down-set only,
    // which natural labelling already guarantees.
    FinitePoset p = FinitePoset::from_up_sets(standard_names(up), up);
    if (!validate_lattice(p).ok()) return true;
    if (seen.insert(canonical_form(p)).second) out.push_back(FiniteLattice::from_poset(std::move(p)));
    return true;
  });
  std::stable_sort(out.begin(), out.end(),
                   [](const FiniteLattice& a, const FiniteLattice& b) { return a.size() < b.size(); });
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form: colour refinement on (colour, colours below, colours above),
// then individualisation of the first non-singleton cell with backtracking.

namespace {

std::vector<int> refine(const FinitePoset& p, std::vector<int> colour) {
  const std::size_t n = p.size();
  std::size_t classes = std::set<int>(colour.begin(), colour.end()).size();
  while (true) {
    std::vector<std::vector<int>> sig(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<int> below;
      std::vector<int> above;
      for (std::size_t u = 0; u < n; ++u) {
        if (u == v) continue;
        if (p.leq(u, v)) below.push_back(colour[u]);
        if (p.leq(v, u)) above.push_back(colour[u]);
      }
      std::sort(below.begin(), below.end());
      std::sort(above.begin(), above.end());
      sig[v].push_back(colour[v]);
      sig[v].push_back(static_cast<int>(below.size()));
      sig[v].insert(sig[v].end(), below.begin(), below.end());
      sig[v].push_back(-1);
      sig[v].insert(sig[v].end(), above.begin(), above.end());
    }
    std::vector<std::vector<int>> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t v = 0; v < n; ++v) {
      colour[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
    }
    if (sorted.size() == classes) return colour;
    classes = sorted.size();
  }
}

void search(const FinitePoset& p, const std::vector<int>& colour, std::vector<ElemMask>& best, bool& have_best) {
  const std::size_t n = p.size();
  // First (lowest colour) cell with more than one member.
  std::vector<int> count(n, 0);
  for (int c : colour) ++count[c];
  int target = -1;
  for (std::size_t c = 0; c < n; ++c) {
    if (count[c] > 1) {
      target = static_cast<int>(c);
      break;
    }
  }
  if (target < 0) {
    std::vector<ElemMask> form(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (p.leq(a, b)) form[colour[a]] |= bit(colour[b]);
      }
    }
    if (!have_best || form < best) {
      best = std::move(form);
      have_best = true;
    }
    return;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (colour[v] != target) continue;
    std::vector<int> next(n);
    for (std::size_t u = 0; u < n; ++u) {
      next[u] = 2 * colour[u] + ((colour[u] == target && u != v) ? 1 : 0);
    }
    search(p, refine(p, std::move(next)), best, have_best);
  }
}

}  // namespace

std::vector<ElemMask> canonical_form(const FinitePoset& p) {
  std::vector<ElemMask> best;
  bool have_best = false;
  if (p.size() == 0) return best;
  search(p, refine(p, std::vector<int>(p.size(), 0)), best, have_best);
  return best;
}

bool isomorphic(const FinitePoset& a, const FinitePoset& b) {
  return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

// ---------------------------------------------------------------------------
// Named lattices

FiniteLattice make_chain(std::size_t n) {
  require_size(n);
  std::vector<ElemMask> up(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) up[i] |= bit(j);
  }
  std::vector<std::string> names = standard_names(up);
  return FiniteLattice::from_poset(FinitePoset::from_up_sets(std::move(names), std::move(up)));
}

FiniteLattice make_boolean(std::size_t atoms) {
  if (atoms > 5) throw Error(ErrorCode::kSizeCapExceeded, "boolean lattice above 5 atoms");
  std::vector<std::pair<Elem, Elem>> none;
  FinitePoset antichain = FinitePoset::from_covers([&] {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < atoms; ++i) v.push_back("p" + std::to_string(i));
    return v;
  }(), none);
  if (atoms == 0) return make_chain(1);
  return downset_lattice(antichain);
}

FiniteLattice make_m3() {
  const std::vector<std::pair<Elem, Elem>> covers{{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}};
  return FiniteLattice::from_poset(FinitePoset::from_covers({"0", "a", "b", "c", "1"}, covers));
}

FiniteLattice make_n5() {
  // 0 < a < c < 1 and 0 < b < 1.
  const std::vector<std::pair<Elem, Elem>> covers{{0, 1}, {1, 3}, {3, 4}, {0, 2}, {2, 4}};
  return FiniteLattice::from_poset(FinitePoset::from_covers({"0", "a", "b", "c", "1"}, covers));
}

FiniteLattice ordinal_sum(const FiniteLattice& a, const FiniteLattice& b) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb - 1;
  require_size(n);
  // a's elements keep their ids; b's bottom is a's top; b's others follow.
  auto map_b = [&](std::size_t y) -> std::size_t {
    if (y == b.bottom()) return a.top();
    std::size_t idx = na;
    for (std::size_t k = 0; k < y; ++k) {
      if (k != b.bottom()) ++idx;
    }
    return idx;
  };
  std::vector<ElemMask> up(n, 0);
  for (std::size_t x = 0; x < na; ++x) {
    for (std::size_t y = 0; y < na; ++y) {
      if (a.leq(x, y)) up[x] |= bit(y);
    }
    if (a.leq(x, a.top())) {
      for (std::size_t y = 0; y < nb; ++y) up[x] |= bit(map_b(y));
    }
  }
  for (std::size_t x = 0; x < nb; ++x) {
    for (std::size_t y = 0; y < nb; ++y) {
      if (b.leq(x, y)) up[map_b(x)] |= bit(map_b(y));
    }
  }
  auto names = standard_names(up);
  return FiniteLattice::from_poset(FinitePoset::from_up_sets(std::move(names), std::move(up)));
}

FiniteLattice product(const FiniteLattice& a, const FiniteLattice& b) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  require_size(na * nb);
  std::vector<ElemMask> up(na * nb, 0);
  for (std::size_t x1 = 0; x1 < na; ++x1) {
    for (std::size_t x2 = 0; x2 < nb; ++x2) {
      for (std::size_t y1 = 0; y1 < na; ++y1) {
        for (std::size_t y2 = 0; y2 < nb; ++y2) {
          if (a.leq(x1, y1) && b.leq(x2, y2)) up[x1 * nb + x2] |= bit(y1 * nb + y2);
        }
      }
    }
  }
  auto names = standard_names(up);
  return FiniteLattice::from_poset(FinitePoset::from_up_sets(std::move(names), std::move(up)));
}

}  // namespace permlat
