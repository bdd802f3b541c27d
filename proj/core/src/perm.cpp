#include "permlat/perm.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

namespace permlat {

ValidationReport validate_perm(const PermStructure& p) {
  ValidationReport report;
  if (p.dimension() > kMaxPermDimension) {
    report.add("dimension_too_large", {std::to_string(p.dimension())});
    return report;
  }
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    if (p.orders[i].size() != n) {
      report.add("rank_count", {std::to_string(i)}, "every order needs one rank per point");
      continue;
    }
    std::vector<int> sorted = p.orders[i];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t r = 0; r < n; ++r) {
      if (sorted[r] != static_cast<int>(r)) {
        report.add("not_a_permutation", {std::to_string(i)}, "ranks must be 0..N-1, each once");
        break;
      }
    }
  }
  return report;
}

Orientation orientation(const PermStructure& p, std::size_t x, std::size_t y) {
  Orientation v = 0;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    if (p.less(i, x, y)) v |= Orientation{1} << i;
  }
  return v;
}

std::vector<bool> relation_from_types(const PermStructure& p, const OrientationSet& types) {
  const std::size_t n = p.size();
  std::vector<bool> rel(n * n, false);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      rel[x * n + y] = x != y && std::binary_search(types.begin(), types.end(), orientation(p, x, y));
    }
  }
  return rel;
}

// ---------------------------------------------------------------------------
// Encoding

ChainCover optimal_cover(const FiniteLattice& lattice) { return dimension_bounds(lattice).cover; }

void check_cover(const FiniteLattice& lattice, const ChainCover& cover) {
  const IrreducibleCore core = irreducible_core(lattice);
  ElemMask covered = 0;
  for (const auto& chain : cover.chains) {
    if (chain.empty()) throw Error(ErrorCode::kPrecondition, "empty chain in cover");
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const Elem e = chain[i];
      if (std::find(core.to_lattice.begin(), core.to_lattice.end(), e) == core.to_lattice.end()) {
        throw Error(ErrorCode::kPrecondition,
                    "cover element " + lattice.name(e) + " is not a meet-irreducible below top");
      }
      if (i > 0 && !lattice.lt(chain[i - 1], e)) {
        throw Error(ErrorCode::kPrecondition, "cover chain is not increasing at " + lattice.name(e));
      }
      covered |= ElemMask{1} << e;
    }
  }
  for (Elem e : core.to_lattice) {
    if (!(covered >> e & 1U)) throw Error(ErrorCode::kPrecondition, "cover misses " + lattice.name(e));
  }
}

namespace {

struct Encoder {
  const OrderedLambdaStructure& s;
  const FiniteLattice& lat;
  MeetIrreducibles mi;
  std::vector<std::optional<std::size_t>> order_for;

  explicit Encoder(const OrderedLambdaStructure& st)
      : s(st), lat(st.space.lattice()), mi(meet_irreducibles(lat)), order_for(lat.size()) {
    for (std::size_t i = 0; i < s.orders.size(); ++i) {
      const Elem b = s.orders[i].bottom();
      if (b < lat.size() && !order_for[b]) order_for[b] = i;
    }
    for (Elem m : mi.elements) {
      if (!order_for[m]) {
        throw Error(ErrorCode::kMissingMeetIrreducible,
                    "meet-irreducible " + lat.name(m) + " is the bottom of no order");
      }
    }
  }

  // The meet-irreducible separating a cover c < c2: above c, not above c2.
  Elem separating(Elem c, Elem c2) const {
    for (Elem m : mi.elements) {
      if (lat.leq(c, m) && !lat.leq(c2, m)) return m;
    }
    throw Error(ErrorCode::kPrecondition, "no meet-irreducible separates " + lat.name(c) + " from " + lat.name(c2));
  }

  SubquotientOrder filler(Elem c, Elem c2) const {
    const Elem m = separating(c, c2);
    return restrict_to(s.space, s.orders[*order_for[m]], c2).order;
  }

  // Extends `chain` by covers up to `target`, smallest id first.
  void climb(std::vector<Elem>& chain, Elem target) const {
    while (chain.back() != target) {
      Elem next = chain.back();
      for (Elem c : lat.poset().upper_covers(chain.back())) {
        if (lat.leq(c, target)) {
          next = c;
          break;
        }
      }
      if (next == chain.back()) throw Error(ErrorCode::kPrecondition, "target not above the chain");
      chain.push_back(next);
    }
  }

  SubquotientOrder fold(const std::vector<SubquotientOrder>& steps) const {
    SubquotientOrder acc = steps.front();
    for (std::size_t i = 1; i < steps.size(); ++i) acc = compose_lex(s.space, acc, steps[i]);
    return acc;
  }

  std::vector<SubquotientOrder> fillers(const std::vector<Elem>& chain) const {
    std::vector<SubquotientOrder> steps;
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) steps.push_back(filler(chain[j], chain[j + 1]));
    return steps;
  }
};

}  // namespace

EncodeResult encode_orders(const OrderedLambdaStructure& s, const std::optional<ChainCover>& cover) {
  const FiniteLattice& lat = s.space.lattice();
  if (!is_distributive(lat).distributive) {
    throw Error(ErrorCode::kNonDistributive, "encoding needs a distributive lattice");
  }
  const Encoder enc(s);
  EncodeResult result;
  result.cover = cover ? *cover : optimal_cover(lat);
  check_cover(lat, result.cover);
  result.bound = static_cast<std::size_t>(cover_cost(result.cover));

  std::vector<std::vector<int>> emitted;
  Codebook& book = result.codebook;
  std::vector<std::size_t> base_index;
  std::vector<std::vector<std::size_t>> companion_index;
  for (std::size_t li = 0; li < result.cover.chains.size(); ++li) {
    const auto& L = result.cover.chains[li];
    std::vector<Elem> chain{lat.bottom()};
    for (Elem m : L) enc.climb(chain, m);
    enc.climb(chain, lat.top());
    const std::vector<SubquotientOrder> steps = enc.fillers(chain);
    base_index.push_back(emitted.size());
    emitted.push_back(enc.fold(steps).ranks());
    book.emitted.push_back({OrderRole::kBase, li, 0});
    companion_index.emplace_back();
    const int bits = ceil_log2(L.size() + 1);
    for (int bit = 0; bit < bits; ++bit) {
      std::vector<SubquotientOrder> flipped;
      for (std::size_t j = 0; j < steps.size(); ++j) {
        // Levels count down from the top: steps above the last element of L
        // are level 0, steps below the first are level |L|.
        const auto level = L.size() - static_cast<std::size_t>(std::count_if(
                                           L.begin(), L.end(), [&](Elem m) { return lat.leq(m, chain[j]); }));
        flipped.push_back(level >> bit & 1U ? reversed(s.space, steps[j]) : steps[j]);
      }
      companion_index.back().push_back(emitted.size());
      emitted.push_back(enc.fold(flipped).ranks());
      book.emitted.push_back({OrderRole::kCompanion, li, static_cast<std::size_t>(bit)});
    }
  }

  // Which emitted order compares each source order inside its top class.
  std::vector<std::optional<std::size_t>> reader(s.orders.size());
  for (std::size_t i = 0; i < s.orders.size(); ++i) {
    const SubquotientOrder& o = s.orders[i];
    if (o.bottom() == o.top()) continue;
    const Elem m = o.bottom();
    const bool catalog = is_meet_irreducible(lat, m) && enc.order_for[m] == i && *enc.mi.cover[m] == o.top();
    if (catalog) {
      for (std::size_t li = 0; li < result.cover.chains.size() && !reader[i]; ++li) {
        const auto& L = result.cover.chains[li];
        if (m == lat.bottom() || std::find(L.begin(), L.end(), m) != L.end()) reader[i] = base_index[li];
      }
    }
    if (reader[i]) continue;
    std::vector<Elem> below{lat.bottom()};
    enc.climb(below, m);
    std::vector<Elem> above{o.top()};
    enc.climb(above, lat.top());
    std::vector<SubquotientOrder> steps = enc.fillers(below);
    steps.push_back(o);
    for (auto& f : enc.fillers(above)) steps.push_back(std::move(f));
    reader[i] = emitted.size();
    emitted.push_back(enc.fold(steps).ranks());
    book.emitted.push_back({OrderRole::kStandalone, i, 0});
  }
  if (emitted.size() > kMaxPermDimension) {
    throw Error(ErrorCode::kSizeCapExceeded, "encoding needs " + std::to_string(emitted.size()) + " orders");
  }
  result.perm.orders = std::move(emitted);
  const std::size_t n = result.perm.dimension();
  book.dimension = n;

  // Symbolic codebook over all orientation vectors.
  auto bit = [](Orientation v, std::size_t i) { return static_cast<std::size_t>(v >> i & 1U); };
  auto level = [&](Orientation v, std::size_t li) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < companion_index[li].size(); ++j) {
      code |= (bit(v, base_index[li]) ^ bit(v, companion_index[li][j])) << j;
    }
    return code;
  };
  auto consistent = [&](Orientation v) {
    for (std::size_t li = 0; li < result.cover.chains.size(); ++li) {
      if (level(v, li) > result.cover.chains[li].size()) return false;
    }
    return true;
  };
  // E_m for the i-th element (from 0) of a chain L: the pair's level is
  // above |L| - i - 1.
  auto in_irreducible = [&](Orientation v, Elem m) {
    for (std::size_t li = 0; li < result.cover.chains.size(); ++li) {
      const auto& L = result.cover.chains[li];
      const auto it = std::find(L.begin(), L.end(), m);
      if (it != L.end()) return level(v, li) + static_cast<std::size_t>(it - L.begin()) >= L.size();
    }
    return false;
  };
  auto in_relation = [&](Orientation v, Elem lambda) {
    if (lambda == lat.bottom()) return false;
    for (Elem m : irreducible_core(lat).to_lattice) {
      if (lat.leq(lambda, m) && !in_irreducible(v, m)) return false;
    }
    return true;
  };
  const Orientation total = Orientation{1} << n;
  std::vector<Orientation> valid;
  for (Orientation v = 0; v < total; ++v) {
    if (consistent(v)) valid.push_back(v);
  }
  book.relations.resize(lat.size());
  for (std::size_t l = 0; l < lat.size(); ++l) {
    for (Orientation v : valid) {
      if (in_relation(v, static_cast<Elem>(l))) book.relations[l].push_back(v);
    }
  }
  book.orders.resize(s.orders.size());
  for (std::size_t i = 0; i < s.orders.size(); ++i) {
    if (!reader[i]) continue;
    const auto& top = book.relations[s.orders[i].top()];
    const auto& bottom = book.relations[s.orders[i].bottom()];
    for (Orientation v : top) {
      if (bit(v, *reader[i]) && !std::binary_search(bottom.begin(), bottom.end(), v)) book.orders[i].push_back(v);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

using AttrMask = std::uint64_t;

std::vector<int> partition_of(std::size_t n, const std::function<bool(std::size_t, std::size_t)>& related) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (related(x, y)) parent[find(static_cast<int>(x))] = find(static_cast<int>(y));
    }
  }
  std::vector<int> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = find(static_cast<int>(x));
  return normalize_partition(labels);
}

}  // namespace

DecodeReport decode_relations(const PermStructure& p) {
  const ValidationReport valid = validate_perm(p);
  if (!valid.ok()) throw Error(ErrorCode::kPrecondition, "invalid permutation structure: " + valid.violations[0].kind);
  DecodeReport report;
  const std::size_t n = p.dimension();
  const std::size_t N = p.size();
  report.sample_size = N;
  report.dimension = n;
  auto cls = [&](Orientation v) { return std::min(v, negate(v, n)); };

  std::vector<Orientation> observed;
  for (std::size_t x = 0; x < N; ++x) {
    for (std::size_t y = x + 1; y < N; ++y) observed.push_back(cls(orientation(p, x, y)));
  }
  std::sort(observed.begin(), observed.end());
  observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
  const std::size_t m = observed.size();
  report.observed_classes = m;
  if (m > 64) throw Error(ErrorCode::kSizeCapExceeded, "more than 64 orientation classes occur");
  std::vector<std::size_t> attr(N * N, 0);
  for (std::size_t x = 0; x < N; ++x) {
    for (std::size_t y = 0; y < N; ++y) {
      if (x != y) {
        attr[x * N + y] = static_cast<std::size_t>(
            std::lower_bound(observed.begin(), observed.end(), cls(orientation(p, x, y))) - observed.begin());
      }
    }
  }
  // Horn rules a, b -> c from every triple x, y, z.
  std::vector<AttrMask> rule(m * m, 0);
  for (std::size_t x = 0; x < N; ++x) {
    for (std::size_t y = 0; y < N; ++y) {
      if (x == y) continue;
      for (std::size_t z = 0; z < N; ++z) {
        if (z == x || z == y) continue;
        rule[attr[x * N + y] * m + attr[y * N + z]] |= AttrMask{1} << attr[x * N + z];
      }
    }
  }
  auto closure = [&](AttrMask set) {
    AttrMask prev;
    do {
      prev = set;
      for (std::size_t a = 0; a < m; ++a) {
        if (!(set >> a & 1U)) continue;
        for (std::size_t b = 0; b < m; ++b) {
          if (set >> b & 1U) set |= rule[a * m + b];
        }
      }
    } while (set != prev);
    return set;
  };
  const AttrMask full = m == 64 ? ~AttrMask{0} : (AttrMask{1} << m) - 1;
  // Next closure in lectic order.
  std::vector<AttrMask> closed{closure(0)};
  while (closed.back() != full) {
    const AttrMask a = closed.back();
    bool found = false;
    for (std::size_t i = m; i-- > 0;) {
      if (a >> i & 1U) continue;
      const AttrMask low = (AttrMask{1} << i) - 1;
      const AttrMask b = closure((a & low) | AttrMask{1} << i);
      if ((b & low) == (a & low)) {
        closed.push_back(b);
        found = true;
        break;
      }
    }
    if (!found) break;
    if (closed.size() > kMaxLatticeSize) {
      throw Error(ErrorCode::kSizeCapExceeded, "more than 64 equivalence relations on the sample");
    }
  }
  std::sort(closed.begin(), closed.end(), [](AttrMask a, AttrMask b) {
    const int ca = std::popcount(a);
    const int cb = std::popcount(b);
    if (ca != cb) return ca < cb;
    // Lexicographic on the sorted member lists.
    for (std::size_t i = 0; i < 64; ++i) {
      const bool ia = a >> i & 1U;
      const bool ib = b >> i & 1U;
      if (ia != ib) return ia;
    }
    return false;
  });

  const std::size_t r = closed.size();
  std::vector<std::vector<int>> parts(r);
  for (std::size_t i = 0; i < r; ++i) {
    DecodedRelation rel;
    for (std::size_t a = 0; a < m; ++a) {
      if (closed[i] >> a & 1U) rel.classes.push_back(observed[a]);
    }
    parts[i] = partition_of(N, [&](std::size_t x, std::size_t y) { return closed[i] >> attr[x * N + y] & 1U; });
    rel.class_count = N == 0 ? 0 : static_cast<std::size_t>(*std::max_element(parts[i].begin(), parts[i].end()) + 1);
    for (std::size_t o = 0; o < n; ++o) {
      std::vector<int> lo(rel.class_count, static_cast<int>(N));
      std::vector<int> hi(rel.class_count, -1);
      std::vector<int> count(rel.class_count, 0);
      for (std::size_t x = 0; x < N; ++x) {
        const int c = parts[i][x];
        lo[c] = std::min(lo[c], p.orders[o][x]);
        hi[c] = std::max(hi[c], p.orders[o][x]);
        ++count[c];
      }
      bool convex = true;
      for (std::size_t c = 0; c < rel.class_count; ++c) convex = convex && hi[c] - lo[c] + 1 == count[c];
      if (convex) rel.convex_in.push_back(o);
    }
    report.relations.push_back(std::move(rel));
  }

  std::vector<std::string> names(r);
  std::vector<ElemMask> up(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    names[i] = i == 0 ? "0" : i + 1 == r ? "1" : "r" + std::to_string(i);
    for (std::size_t j = 0; j < r; ++j) {
      if ((closed[i] & ~closed[j]) == 0) up[i] |= ElemMask{1} << j;
    }
  }
  report.lattice = FiniteLattice::from_poset(FinitePoset::from_up_sets(names, up));
  for (const auto& [a, b] : report.lattice.poset().hasse_edges()) report.hasse.emplace_back(a, b);
  report.distributive = is_distributive(report.lattice).distributive;
  for (std::size_t i = 0; i < r && report.joins_are_closures; ++i) {
    for (std::size_t j = i + 1; j < r && report.joins_are_closures; ++j) {
      const std::vector<int> joined = partition_of(N, [&](std::size_t x, std::size_t y) {
        return parts[i][x] == parts[i][y] || parts[j][x] == parts[j][y];
      });
      report.joins_are_closures = joined == parts[report.lattice.join(static_cast<Elem>(i), static_cast<Elem>(j))];
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Profiles

std::set<std::string> Profile::support() const {
  std::set<std::string> out;
  for (const auto& [key, count] : counts) out.insert(key);
  return out;
}

namespace {

std::string tuple_type(const PermStructure& p, const std::vector<std::size_t>& tuple) {
  std::string key;
  for (std::size_t o = 0; o < p.dimension(); ++o) {
    if (o > 0) key.push_back('|');
    for (std::size_t i : tuple) {
      int below = 0;
      for (std::size_t j : tuple) below += p.orders[o][j] < p.orders[o][i] ? 1 : 0;
      key.push_back(static_cast<char>('0' + below));
    }
  }
  return key;
}

}  // namespace

Profile profile(const PermStructure& p, std::size_t k, std::size_t samples, std::uint64_t seed) {
  if (k > 10) throw Error(ErrorCode::kPrecondition, "profiles support k <= 10");
  Profile out;
  out.k = k;
  const std::size_t n = p.size();
  if (k == 0 || k > n) return out;
  out.exhaustive = k <= kMaxExhaustiveProfile;
  std::vector<std::size_t> tuple;
  if (out.exhaustive) {
    std::vector<bool> used(n, false);
    std::function<void()> rec = [&]() {
      if (tuple.size() == k) {
        ++out.counts[tuple_type(p, tuple)];
        ++out.tuples;
        return;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        used[i] = true;
        tuple.push_back(i);
        rec();
        tuple.pop_back();
        used[i] = false;
      }
    };
    rec();
    return out;
  }
  SeededStream rng(seed);
  std::vector<std::size_t> pool(n);
  for (std::size_t s = 0; s < samples; ++s) {
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
    tuple.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    ++out.counts[tuple_type(p, tuple)];
    ++out.tuples;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cameron sweep

std::string to_string(SegmentRelation r) {
  switch (r) {
    case SegmentRelation::kEqual:
      return "equal";
    case SegmentRelation::kReversed:
      return "reversed";
    case SegmentRelation::kIndependent:
      return "independent";
  }
  return "?";
}

CameronResult cameron_enumeration(std::size_t sample_size, std::uint64_t seed) {
  CameronResult result;
  constexpr SegmentRelation kChoices[] = {SegmentRelation::kEqual, SegmentRelation::kReversed,
                                          SegmentRelation::kIndependent};
  for (std::size_t chain = 2; chain <= 3; ++chain) {
    const LatticeRef lat = share(make_chain(chain));
    const std::vector<OrderSpec> segments = catalog_signature(*lat);
    const std::size_t count = segments.size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < count; ++i) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
      CameronInstance inst;
      inst.chain = chain;
      std::vector<OrderSpec> sig = segments;
      std::vector<std::size_t> partner(count);
      for (std::size_t i = 0, code = c; i < count; ++i, code /= 3) {
        // Most significant segment first so the sweep reads lexicographically.
        inst.segments.insert(inst.segments.begin(), kChoices[code % 3]);
      }
      for (std::size_t i = 0; i < count; ++i) {
        partner[i] = i;
        if (inst.segments[i] == SegmentRelation::kIndependent) {
          partner[i] = sig.size();
          sig.push_back(segments[i]);
        }
      }
      const GenerationResult g = generate_generic(lat, sig, {seed, sample_size, 2});
      const auto& s = g.structure;
      std::vector<SubquotientOrder> first;
      std::vector<SubquotientOrder> second;
      for (std::size_t i = 0; i < count; ++i) {
        first.push_back(s.orders[i]);
        second.push_back(inst.segments[i] == SegmentRelation::kReversed ? reversed(s.space, s.orders[i])
                                                                          : s.orders[partner[i]]);
      }
      auto fold = [&](const std::vector<SubquotientOrder>& steps) {
        SubquotientOrder acc = steps.front();
        for (std::size_t i = 1; i < steps.size(); ++i) acc = compose_lex(s.space, acc, steps[i]);
        return acc;
      };
      const PermStructure perm{{fold(first).ranks(), fold(second).ranks()}};
      inst.faithful = isomorphic(decode_relations(perm).lattice, *lat);
      if (inst.faithful) {
        Profile prof = profile(perm, 3);
        const auto sup = prof.support();
        for (std::size_t k = 0; k < result.profiles.size() && !inst.profile_class; ++k) {
          if (result.profiles[k].support() == sup) inst.profile_class = k;
        }
        if (!inst.profile_class) {
          inst.profile_class = result.profiles.size();
          result.profiles.push_back(std::move(prof));
        }
      }
      result.sweep.push_back(std::move(inst));
    }
  }
  return result;
}

}  // namespace permlat
