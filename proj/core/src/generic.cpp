#include "permlat/generic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "permlat/parallel.hpp"

namespace permlat {
namespace {

// Per-order options for a distance vector over A: nullopt only, or gaps 0..m.
std::vector<std::vector<std::optional<int>>> gap_options(const OrderedLambdaStructure& s,
                                                         std::span<const std::size_t> over,
                                                         std::span<const Elem> dist) {
  const FiniteLattice& lat = s.space.lattice();
  std::vector<std::vector<std::optional<int>>> options;
  for (const SubquotientOrder& o : s.orders) {
    bool same_bottom = false;
    std::set<int> ranks_in_top;
    for (std::size_t i = 0; i < over.size(); ++i) {
      if (lat.leq(dist[i], o.bottom())) same_bottom = true;
      if (lat.leq(dist[i], o.top())) ranks_in_top.insert(o.rank(over[i]));
    }
    std::vector<std::optional<int>> opts;
    if (same_bottom || ranks_in_top.empty()) {
      opts.emplace_back(std::nullopt);
    } else {
      for (int g = 0; g <= static_cast<int>(ranks_in_top.size()); ++g) opts.emplace_back(g);
    }
    options.push_back(std::move(opts));
  }
  return options;
}

std::vector<std::size_t> first_combo(std::size_t k) {
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  return c;
}

// Next k-subset of {0..n-1} in lexicographic order; false after the last.
bool next_combo(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::vector<std::size_t>> all_combos(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> c = first_combo(k);
  do {
    out.push_back(c);
  } while (next_combo(c, n));
  return out;
}

bool contains(std::span<const std::size_t> sorted, std::size_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::set<OnePointType> realized_types(const OrderedLambdaStructure& s, std::span<const std::size_t> over) {
  std::set<OnePointType> out;
  for (std::size_t p = 0; p < s.space.size(); ++p) {
    if (!contains(over, p)) out.insert(type_of(s, p, over));
  }
  return out;
}

void check_signature(const FiniteLattice& lat, std::span<const OrderSpec> signature) {
  for (const OrderSpec& o : signature) {
    if (o.bottom >= lat.size() || o.top >= lat.size() || !lat.lt(o.bottom, o.top)) {
      throw Error(ErrorCode::kInvalidSignature, "each order needs bottom strictly below top");
    }
    if (!is_meet_irreducible(lat, o.bottom)) {
      throw Error(ErrorCode::kMeetReducibleBottom, "bottom relation " + lat.name(o.bottom) + " is meet-reducible");
    }
  }
}

}  // namespace

std::vector<OnePointType> enumerate_one_point_types(const OrderedLambdaStructure& s,
                                                    std::span<const std::size_t> over) {
  std::vector<OnePointType> out;
  const LambdaSpace sub = s.space.induced(over);
  for_each_extension(sub, [&](std::span<const Elem> dist) {
    const auto options = gap_options(s, over, dist);
    std::vector<std::size_t> pick(options.size(), 0);
    while (true) {
      OnePointType t{{over.begin(), over.end()}, {dist.begin(), dist.end()}, {}};
      for (std::size_t i = 0; i < options.size(); ++i) t.gaps.push_back(options[i][pick[i]]);
      out.push_back(std::move(t));
      // Odometer with the last order fastest.
      std::size_t i = options.size();
      while (i > 0 && ++pick[i - 1] == options[i - 1].size()) pick[--i] = 0;
      if (i == 0) break;
    }
    return true;
  });
  return out;
}

OnePointType type_of(const OrderedLambdaStructure& s, std::size_t p, std::span<const std::size_t> over) {
  const FiniteLattice& lat = s.space.lattice();
  OnePointType t{{over.begin(), over.end()}, {}, {}};
  for (std::size_t a : over) t.distances.push_back(s.space.d(p, a));
  for (const SubquotientOrder& o : s.orders) {
    bool same_bottom = false;
    std::set<int> below;
    bool meets_top = false;
    for (std::size_t a : over) {
      const Elem d = s.space.d(p, a);
      if (lat.leq(d, o.bottom())) same_bottom = true;
      if (lat.leq(d, o.top())) {
        meets_top = true;
        if (o.rank(a) < o.rank(p)) below.insert(o.rank(a));
      }
    }
    if (same_bottom || !meets_top) {
      t.gaps.emplace_back(std::nullopt);
    } else {
      t.gaps.emplace_back(static_cast<int>(below.size()));
    }
  }
  return t;
}

Realization realize_type(OrderedLambdaStructure& s, const OnePointType& t, PointId id, SeededStream& rng) {
  const FiniteLattice& lat = s.space.lattice();
  for (const SubquotientOrder& o : s.orders) {
    if (!is_meet_irreducible(lat, o.bottom())) {
      throw Error(ErrorCode::kMeetReducibleBottom, "bottom relation " + lat.name(o.bottom()) + " is meet-reducible");
    }
  }
  const std::size_t n = s.space.size();
  if (t.distances.size() != t.over.size() || t.gaps.size() != s.orders.size() ||
      !std::is_sorted(t.over.begin(), t.over.end())) {
    throw Error(ErrorCode::kInvalidType, "type shape does not match the structure");
  }
  for (std::size_t i = 0; i < t.over.size(); ++i) {
    if (t.over[i] >= n || t.distances[i] == lat.bottom() || t.distances[i] >= lat.size()) {
      throw Error(ErrorCode::kInvalidType, "type distance or base point out of range");
    }
    for (std::size_t j = 0; j < t.over.size(); ++j) {
      const Elem dab = s.space.d(t.over[i], t.over[j]);
      if (!lat.leq(t.distances[i], lat.join(t.distances[j], dab))) {
        throw Error(ErrorCode::kInvalidType, "type distances break the triangle inequality");
      }
    }
  }
  const auto options = gap_options(s, t.over, t.distances);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (std::find(options[i].begin(), options[i].end(), t.gaps[i]) == options[i].end()) {
      throw Error(ErrorCode::kInvalidType, "order position " + std::to_string(i) + " is not allowed by the distances");
    }
  }

  // Distances to every point: given on A, canonical amalgam elsewhere.
  std::vector<Elem> dx(n);
  for (std::size_t p = 0; p < n; ++p) {
    Elem acc = lat.top();
    for (std::size_t i = 0; i < t.over.size(); ++i) {
      acc = lat.meet(acc, lat.join(t.distances[i], s.space.d(t.over[i], p)));
    }
    dx[p] = acc;
  }
  for (std::size_t i = 0; i < t.over.size(); ++i) dx[t.over[i]] = t.distances[i];
  for (std::size_t p = 0; p < n; ++p) {
    if (dx[p] == lat.bottom()) return {p, false};
  }

  std::vector<int> new_ranks;
  for (std::size_t oi = 0; oi < s.orders.size(); ++oi) {
    SubquotientOrder& o = s.orders[oi];
    std::optional<int> existing;
    std::vector<std::size_t> top_class;
    for (std::size_t p = 0; p < n; ++p) {
      if (lat.leq(dx[p], o.bottom())) existing = o.rank(p);
      if (lat.leq(dx[p], o.top())) top_class.push_back(p);
    }
    if (existing) {
      new_ranks.push_back(*existing);
      continue;
    }
    if (top_class.empty()) {
      new_ranks.push_back(0);
      continue;
    }
    int classes = 0;
    for (std::size_t p : top_class) classes = std::max(classes, o.rank(p) + 1);
    int lo = 0;
    int hi = classes;
    if (t.gaps[oi]) {
      std::set<int> a_ranks;
      for (std::size_t i = 0; i < t.over.size(); ++i) {
        if (lat.leq(t.distances[i], o.top())) a_ranks.insert(o.rank(t.over[i]));
      }
      const std::vector<int> sorted(a_ranks.begin(), a_ranks.end());
      const int g = *t.gaps[oi];
      if (g > 0) lo = sorted[g - 1] + 1;
      if (g < static_cast<int>(sorted.size())) hi = sorted[g];
    }
    const int slot = lo + static_cast<int>(rng.below(static_cast<std::size_t>(hi - lo + 1)));
    std::vector<int> ranks = o.ranks();
    for (std::size_t p : top_class) {
      if (ranks[p] >= slot) ++ranks[p];
    }
    o = SubquotientOrder(o.bottom(), o.top(), std::move(ranks));
    new_ranks.push_back(slot);
  }
  s.space.add_point(id, dx);
  for (std::size_t oi = 0; oi < s.orders.size(); ++oi) s.orders[oi].push_rank(new_ranks[oi]);
  return {n, true};
}

// ---------------------------------------------------------------------------
// Checks

ExtensionReport extension_property_check(const OrderedLambdaStructure& s, std::size_t k) {
  ExtensionReport report;
  report.k = k;
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t size = 0; size <= k && size <= s.space.size(); ++size) {
    auto combos = all_combos(s.space.size(), size);
    subsets.insert(subsets.end(), combos.begin(), combos.end());
  }
  struct Partial {
    std::size_t types = 0;
    std::size_t realized = 0;
    std::vector<OnePointType> missing;
  };
  std::vector<Partial> partial(subsets.size());
  parallel_for(subsets.size(), [&](std::size_t i) {
    const auto types = enumerate_one_point_types(s, subsets[i]);
    const auto have = realized_types(s, subsets[i]);
    Partial& out = partial[i];
    out.types = types.size();
    for (const auto& t : types) {
      if (have.count(t)) {
        ++out.realized;
      } else if (out.missing.size() < kMaxListedFailures) {
        out.missing.push_back(t);
      }
    }
  });
  report.subsets = subsets.size();
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    report.types += partial[i].types;
    report.realized += partial[i].realized;
    for (auto& t : partial[i].missing) {
      if (report.missing.size() < kMaxListedFailures) report.missing.push_back({subsets[i], std::move(t)});
    }
  }
  return report;
}

namespace {

// Relation code of p to q in order o: 0 same bottom class, 1 below, 2 above,
// 3 incomparable.
char order_code(const LambdaSpace& space, const SubquotientOrder& o, std::size_t p, std::size_t q) {
  const FiniteLattice& lat = space.lattice();
  const Elem d = space.d(p, q);
  if (lat.leq(d, o.bottom())) return 0;
  if (!lat.leq(d, o.top())) return 3;
  return o.rank(p) < o.rank(q) ? 1 : 2;
}

std::string tuple_key(const OrderedLambdaStructure& s, std::span<const std::size_t> tuple) {
  std::string key;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      key.push_back(static_cast<char>(s.space.d(tuple[i], tuple[j])));
      for (const auto& o : s.orders) key.push_back(order_code(s.space, o, tuple[i], tuple[j]));
    }
  }
  return key;
}

std::string pattern(const OrderedLambdaStructure& s, std::span<const std::size_t> tuple, std::size_t p) {
  std::string key;
  for (std::size_t a : tuple) {
    key.push_back(static_cast<char>(s.space.d(p, a)));
    for (const auto& o : s.orders) key.push_back(order_code(s.space, o, p, a));
  }
  return key;
}

void ordered_tuples(std::size_t n, std::size_t len, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&]() {
    if (cur.size() == len) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(i);
      rec();
      cur.pop_back();
      used[i] = false;
    }
  };
  rec();
}

}  // namespace

HomogeneityReport homogeneity_check(const OrderedLambdaStructure& s, std::size_t m) {
  HomogeneityReport report;
  report.m = m;
  const std::size_t n = s.space.size();
  for (std::size_t len = 1; len <= m && len <= n; ++len) {
    std::vector<std::vector<std::size_t>> tuples;
    ordered_tuples(n, len, tuples);
    report.tuples += tuples.size();
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < tuples.size(); ++i) groups[tuple_key(s, tuples[i])].push_back(i);
    std::vector<const std::vector<std::size_t>*> members;
    for (const auto& [key, idx] : groups) members.push_back(&idx);

    struct GroupResult {
      std::size_t failures = 0;
      std::vector<HomogeneityFailure> examples;
    };
    std::vector<GroupResult> results(members.size());
    parallel_for(members.size(), [&](std::size_t g) {
      // First (tuple, point) realizing each pattern in the group.
      std::map<std::string, std::pair<std::size_t, std::size_t>> seen;
      std::vector<std::set<std::string>> own(members[g]->size());
      for (std::size_t mi = 0; mi < members[g]->size(); ++mi) {
        const auto& tuple = tuples[(*members[g])[mi]];
        for (std::size_t p = 0; p < n; ++p) {
          if (std::find(tuple.begin(), tuple.end(), p) != tuple.end()) continue;
          std::string pat = pattern(s, tuple, p);
          seen.emplace(pat, std::make_pair((*members[g])[mi], p));
          own[mi].insert(std::move(pat));
        }
      }
      GroupResult& out = results[g];
      for (std::size_t mi = 0; mi < members[g]->size(); ++mi) {
        if (own[mi].size() == seen.size()) continue;
        for (const auto& [pat, where] : seen) {
          if (own[mi].count(pat)) continue;
          ++out.failures;
          if (out.examples.size() < kMaxListedFailures) {
            out.examples.push_back({tuples[where.first], tuples[(*members[g])[mi]], where.second});
          }
        }
      }
    });
    for (auto& r : results) {
      report.failures += r.failures;
      for (auto& e : r.examples) {
        if (report.examples.size() < kMaxListedFailures) report.examples.push_back(std::move(e));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Generation

std::vector<OrderSpec> catalog_signature(const FiniteLattice& lattice) {
  std::vector<OrderSpec> out;
  const MeetIrreducibles mi = meet_irreducibles(lattice);
  for (Elem e : mi.elements) out.push_back({e, *mi.cover[e]});
  return out;
}

GenerationResult generate_generic(const LatticeRef& lattice, std::span<const OrderSpec> signature,
                                  const GenerationConfig& config) {
  const FiniteLattice& lat = *lattice;
  if (!is_distributive(lat).distributive) {
    throw Error(ErrorCode::kNonDistributive, "generic structures need a distributive lattice");
  }
  check_signature(lat, signature);
  if (config.target_size == 0 || config.saturation_depth == 0) {
    throw Error(ErrorCode::kPrecondition, "target size and depth must be at least 1");
  }
  GenerationResult result;
  for (std::size_t i = 0; i < signature.size(); ++i) {
    for (std::size_t j = i + 1; j < signature.size(); ++j) {
      if (signature[i] == signature[j]) {
        result.warnings.push_back("orders " + std::to_string(i) + " and " + std::to_string(j) +
                                  " share bottom and top; one may be redundant up to reversal");
      }
    }
  }
  OrderedLambdaStructure& s = result.structure;
  s.space = LambdaSpace(lattice);
  for (const OrderSpec& o : signature) s.orders.emplace_back(o.bottom, o.top, std::vector<int>{});

  SeededStream rng(config.seed);
  const std::size_t k = config.saturation_depth;
  std::vector<std::optional<std::vector<std::size_t>>> cursor(k + 1);
  // Start of the type search per size; it advances after every success so
  // that coarse and fine types over one subset take turns.
  std::vector<std::size_t> turn(k + 1, 0);

  // Realizes the first unrealized type over subsets of one size, starting at
  // that size's cursor and wrapping around once.
  auto try_size = [&](std::size_t size) -> bool {
    const std::size_t n = s.space.size();
    std::vector<std::size_t> start = cursor[size].value_or(first_combo(size));
    if (!start.empty() && start.back() >= n) start = first_combo(size);
    std::vector<std::size_t> c = start;
    do {
      const auto types = enumerate_one_point_types(s, c);
      const auto have = realized_types(s, c);
      for (std::size_t i = 0; i < types.size(); ++i) {
        const OnePointType& t = types[(turn[size] + i) % types.size()];
        if (have.count(t)) continue;
        realize_type(s, t, static_cast<PointId>(n), rng);
        ++turn[size];
        std::vector<std::size_t> next = c;
        cursor[size] = next_combo(next, n) ? next : first_combo(size);
        return true;
      }
      if (!next_combo(c, n)) c = first_combo(size);
    } while (c != start);
    return false;
  };

  std::size_t step = 0;
  while (s.space.size() < config.target_size) {
    bool grown = false;
    for (std::size_t attempt = 0; attempt <= k && !grown; ++attempt) {
      const std::size_t size = (step + attempt) % (k + 1);
      if (size <= s.space.size()) grown = try_size(size);
    }
    ++step;
    if (grown) continue;
    // Saturated up to k: add a random type over a random k-subset, or a
    // point at distance top from everything if that lands on an old point.
    ++result.fallback_steps;
    const std::size_t n = s.space.size();
    const std::size_t size = std::min(k, n);
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
    std::vector<std::size_t> over(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(over.begin(), over.end());
    const auto types = enumerate_one_point_types(s, over);
    const Realization r = realize_type(s, types[rng.below(types.size())], static_cast<PointId>(n), rng);
    if (!r.fresh) {
      const auto empty_types = enumerate_one_point_types(s, {});
      realize_type(s, empty_types.front(), static_cast<PointId>(n), rng);
    }
  }
  result.saturation = extension_property_check(s, k);
  return result;
}

RelationReport relation_check(const LambdaSpace& space) {
  RelationReport report;
  const FiniteLattice& lat = space.lattice();
  const std::size_t n = space.size();
  std::vector<std::vector<int>> labels;
  for (std::size_t l = 0; l < lat.size(); ++l) labels.push_back(class_labels(space, static_cast<Elem>(l)));
  auto same = [&](std::size_t l, std::size_t x, std::size_t y) { return labels[l][x] == labels[l][y]; };
  for (std::size_t a = 0; a < lat.size(); ++a) {
    for (std::size_t b = a + 1; b < lat.size(); ++b) {
      if (labels[a] == labels[b]) report.coinciding.emplace_back(a, b);
      const Elem m = lat.meet(a, b);
      bool meet_ok = true;
      for (std::size_t x = 0; x < n && meet_ok; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (same(m, x, y) != (same(a, x, y) && same(b, x, y))) {
            meet_ok = false;
            break;
          }
        }
      }
      if (!meet_ok) report.meet_mismatch.emplace_back(a, b);
      if (lat.poset().comparable(a, b)) continue;
      const Elem j = lat.join(a, b);
      bool done = false;
      for (std::size_t x = 0; x < n && !done; ++x) {
        for (std::size_t y = 0; y < n && !done; ++y) {
          if (!same(j, x, y)) continue;
          bool meets = false;
          for (std::size_t z = 0; z < n && !meets; ++z) meets = same(a, x, z) && same(b, z, y);
          if (!meets) {
            report.not_cross_cutting.emplace_back(a, b, x);
            done = true;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace permlat
