#include "permlat/ultrametric.hpp"

#include <algorithm>
#include <string>

namespace permlat {
namespace {

std::string pid(PointId id) { return std::to_string(id); }

}  // namespace

// ---------------------------------------------------------------------------
// LambdaSpace

LambdaSpace::LambdaSpace(LatticeRef lattice) : lattice_(std::move(lattice)) {}

LambdaSpace::LambdaSpace(LatticeRef lattice, std::vector<PointId> points, std::vector<Elem> distances)
    : lattice_(std::move(lattice)), points_(std::move(points)), dist_(std::move(distances)) {
  if (dist_.size() != points_.size() * points_.size()) {
    throw Error(ErrorCode::kInvalidSpace, "distance matrix does not match the point count");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second) {
      throw Error(ErrorCode::kInvalidSpace, "repeated point id " + pid(points_[i]));
    }
  }
  for (Elem e : dist_) {
    if (e >= lattice_->size()) throw Error(ErrorCode::kInvalidSpace, "distance outside the lattice");
  }
}

std::optional<std::size_t> LambdaSpace::index_of(PointId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Elem LambdaSpace::distance(PointId x, PointId y) const {
  const auto i = index_of(x);
  const auto j = index_of(y);
  if (!i || !j) throw Error(ErrorCode::kInvalidSpace, "unknown point id");
  return d(*i, *j);
}

void LambdaSpace::add_point(PointId id, std::span<const Elem> to_existing) {
  const std::size_t n = size();
  if (to_existing.size() != n) throw Error(ErrorCode::kInvalidSpace, "distance vector has the wrong length");
  if (!index_.emplace(id, n).second) throw Error(ErrorCode::kInvalidSpace, "repeated point id " + pid(id));
  std::vector<Elem> next((n + 1) * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) next[i * (n + 1) + j] = dist_[i * n + j];
    next[i * (n + 1) + n] = to_existing[i];
    next[n * (n + 1) + i] = to_existing[i];
  }
  next[n * (n + 1) + n] = lattice_->bottom();
  dist_ = std::move(next);
  points_.push_back(id);
}

void LambdaSpace::set(std::size_t i, std::size_t j, Elem value) {
  dist_[i * size() + j] = value;
  dist_[j * size() + i] = value;
}

LambdaSpace LambdaSpace::induced(std::span<const std::size_t> positions) const {
  std::vector<PointId> pts;
  std::vector<Elem> dist;
  for (std::size_t i : positions) {
    pts.push_back(points_[i]);
    for (std::size_t j : positions) dist.push_back(d(i, j));
  }
  return LambdaSpace(lattice_, std::move(pts), std::move(dist));
}

bool LambdaSpace::operator==(const LambdaSpace& other) const {
  const bool same_lattice = lattice_ == other.lattice_ || (lattice_ && other.lattice_ && *lattice_ == *other.lattice_);
  return same_lattice && points_ == other.points_ && dist_ == other.dist_;
}

ValidationReport validate_space(const LambdaSpace& s) {
  ValidationReport report;
  const FiniteLattice& lat = s.lattice();
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (s.d(x, x) != lat.bottom()) report.add("nonzero_self_distance", {pid(s.point(x))});
    for (std::size_t y = x + 1; y < n; ++y) {
      if (s.d(x, y) != s.d(y, x)) report.add("asymmetric", {pid(s.point(x)), pid(s.point(y))});
      if (s.d(x, y) == lat.bottom() || s.d(y, x) == lat.bottom()) {
        report.add("zero_distance", {pid(s.point(x)), pid(s.point(y))});
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (!lat.leq(s.d(x, z), lat.join(s.d(x, y), s.d(y, z)))) {
          report.add("triangle", {pid(s.point(x)), pid(s.point(y)), pid(s.point(z))},
                     "d(x,z)=" + lat.name(s.d(x, z)) + " not below d(x,y) v d(y,z)=" +
                         lat.name(lat.join(s.d(x, y), s.d(y, z))));
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Equivalence systems

std::vector<int> normalize_partition(std::span<const int> labels) {
  std::vector<int> out(labels.size());
  std::unordered_map<int, int> renumber;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [it, fresh] = renumber.emplace(labels[i], static_cast<int>(renumber.size()));
    out[i] = it->second;
  }
  return out;
}

ValidationReport validate_equivalence_system(const EquivalenceSystem& e) {
  ValidationReport report;
  const FiniteLattice& lat = *e.lattice;
  const std::size_t n = e.points.size();
  if (e.classes.size() != lat.size()) {
    report.add("shape", {}, "one partition per lattice element is required");
    return report;
  }
  for (const auto& labels : e.classes) {
    if (labels.size() != n) {
      report.add("shape", {}, "partition size does not match the point count");
      return report;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::vector<std::string> w{pid(e.points[i]), pid(e.points[j])};
      if (e.same_class(lat.bottom(), i, j)) report.add("bottom_not_discrete", w);
      if (!e.same_class(lat.top(), i, j)) report.add("top_not_trivial", w);
      for (std::size_t a = 0; a < lat.size(); ++a) {
        for (std::size_t b = 0; b < lat.size(); ++b) {
          const bool both = e.same_class(a, i, j) && e.same_class(b, i, j);
          if (lat.leq(a, b) && e.same_class(a, i, j) && !e.same_class(b, i, j)) {
            report.add("not_monotone", {lat.name(a), lat.name(b), w[0], w[1]});
          }
          if (a < b && both != e.same_class(lat.meet(a, b), i, j)) {
            report.add("meet_not_preserved", {lat.name(a), lat.name(b), w[0], w[1]});
          }
        }
      }
    }
  }
  return report;
}

std::vector<int> class_labels(const LambdaSpace& s, Elem lambda) {
  const FiniteLattice& lat = s.lattice();
  const std::size_t n = s.size();
  std::vector<int> labels(n, 0);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int label = -1;
    for (std::size_t j = 0; j < i && label < 0; ++j) {
      if (lat.leq(s.d(i, j), lambda)) label = labels[j];
    }
    labels[i] = label >= 0 ? label : next++;
  }
  return labels;
}

EquivalenceSystem equivalences_from_space(const LambdaSpace& s) {
  EquivalenceSystem e{s.lattice_ref(), s.points(), {}};
  for (std::size_t lambda = 0; lambda < s.lattice().size(); ++lambda) {
    e.classes.push_back(class_labels(s, static_cast<Elem>(lambda)));
  }
  return e;
}

LambdaSpace space_from_equivalences(const EquivalenceSystem& e) {
  const FiniteLattice& lat = *e.lattice;
  const std::size_t n = e.points.size();
  std::vector<Elem> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ElemMask holding = 0;
      for (std::size_t lambda = 0; lambda < lat.size(); ++lambda) {
        if (e.same_class(lambda, i, j)) holding |= ElemMask{1} << lambda;
      }
      dist[i * n + j] = lat.meet_all(holding);
    }
  }
  return LambdaSpace(e.lattice, e.points, std::move(dist));
}

// ---------------------------------------------------------------------------
// Enumeration

void for_each_extension(const LambdaSpace& s, const std::function<bool(std::span<const Elem>)>& visit) {
  const FiniteLattice& lat = s.lattice();
  const std::size_t n = s.size();
  std::vector<Elem> values(n);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (stop) return;
    if (i == n) {
      if (!visit(values)) stop = true;
      return;
    }
    for (std::size_t v = 0; v < lat.size() && !stop; ++v) {
      if (v == lat.bottom()) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        const Elem dij = s.d(i, j);
        ok = lat.leq(v, lat.join(values[j], dij)) && lat.leq(values[j], lat.join(v, dij)) &&
             lat.leq(dij, lat.join(v, values[j]));
      }
      if (!ok) continue;
      values[i] = static_cast<Elem>(v);
      rec(i + 1);
    }
  };
  rec(0);
}

void for_each_space(const LatticeRef& lattice, std::size_t n, const std::function<bool(const LambdaSpace&)>& visit) {
  bool stop = false;
  std::function<void(const LambdaSpace&)> rec = [&](const LambdaSpace& s) {
    if (stop) return;
    if (s.size() == n) {
      if (!visit(s)) stop = true;
      return;
    }
    for_each_extension(s, [&](std::span<const Elem> to_existing) {
      LambdaSpace next = s;
      next.add_point(static_cast<PointId>(s.size()), to_existing);
      rec(next);
      return !stop;
    });
  };
  rec(LambdaSpace(lattice));
}

// ---------------------------------------------------------------------------
// Amalgamation

namespace {

struct Layout {
  std::vector<std::size_t> base_in_f1;
  std::vector<std::size_t> base_in_f2;
  std::vector<std::size_t> new_in_f1;
  std::vector<std::size_t> new_in_f2;
};

// Positions of base points inside each factor and of the remaining points;
// checks that base embeds in both factors.
Layout layout_of(const LambdaSpace& base, const LambdaSpace& f1, const LambdaSpace& f2) {
  Layout out;
  for (const LambdaSpace* f : {&f1, &f2}) {
    auto& positions = f == &f1 ? out.base_in_f1 : out.base_in_f2;
    for (PointId id : base.points()) {
      const auto at = f->index_of(id);
      if (!at) throw Error(ErrorCode::kInvalidEmbedding, "base point " + pid(id) + " missing from a factor");
      positions.push_back(*at);
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t j = 0; j < base.size(); ++j) {
        if (f->d(positions[i], positions[j]) != base.d(i, j)) {
          throw Error(ErrorCode::kInvalidEmbedding, "factor distance between base points " + pid(base.point(i)) +
                                                        " and " + pid(base.point(j)) + " disagrees with the base");
        }
      }
    }
  }
  for (std::size_t i = 0; i < f1.size(); ++i) {
    if (!base.index_of(f1.point(i))) out.new_in_f1.push_back(i);
  }
  for (std::size_t i = 0; i < f2.size(); ++i) {
    if (!base.index_of(f2.point(i))) out.new_in_f2.push_back(i);
  }
  return out;
}

Elem cross_formula(const FiniteLattice& lat, const LambdaSpace& f1, const LambdaSpace& f2, const Layout& layout,
                   std::size_t a, std::size_t b) {
  Elem acc = lat.top();
  for (std::size_t c = 0; c < layout.base_in_f1.size(); ++c) {
    acc = lat.meet(acc, lat.join(f1.d(a, layout.base_in_f1[c]), f2.d(layout.base_in_f2[c], b)));
  }
  return acc;
}

}  // namespace

AmalgamResult canonical_amalgam(const LambdaSpace& base, const LambdaSpace& f1, const LambdaSpace& f2) {
  const FiniteLattice& lat = f1.lattice();
  if (!(lat == f2.lattice()) || !(lat == base.lattice())) {
    throw Error(ErrorCode::kInvalidFactor, "base and factors must share one lattice");
  }
  if (!is_distributive(lat).distributive) {
    throw Error(ErrorCode::kNonDistributive, "amalgamation needs a distributive lattice");
  }
  for (const LambdaSpace* s : {&base, &f1, &f2}) {
    const ValidationReport report = validate_space(*s);
    if (!report.ok()) {
      throw Error(ErrorCode::kInvalidFactor, "factor fails validation: " + report.violations.front().kind);
    }
  }
  const Layout layout = layout_of(base, f1, f2);
  for (std::size_t b : layout.new_in_f2) {
    if (f1.index_of(f2.point(b))) {
      throw Error(ErrorCode::kPointIdCollision, "point id " + pid(f2.point(b)) + " appears in both factors");
    }
  }

  const std::size_t n1 = f1.size();
  std::vector<std::vector<Elem>> cross(layout.new_in_f2.size(), std::vector<Elem>(n1));
  AmalgamResult result{f1, {}};
  std::vector<bool> merged(layout.new_in_f2.size(), false);
  for (std::size_t k = 0; k < layout.new_in_f2.size(); ++k) {
    const std::size_t b = layout.new_in_f2[k];
    for (std::size_t c = 0; c < layout.base_in_f1.size(); ++c) {
      cross[k][layout.base_in_f1[c]] = f2.d(b, layout.base_in_f2[c]);
    }
    for (std::size_t a : layout.new_in_f1) {
      cross[k][a] = cross_formula(lat, f1, f2, layout, a, b);
      if (cross[k][a] == lat.bottom() && !merged[k]) {
        merged[k] = true;
        result.identified.emplace_back(f2.point(b), f1.point(a));
      }
    }
  }
  // New f2 points in order; distances among them come from f2.
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < layout.new_in_f2.size(); ++k) {
    if (merged[k]) continue;
    std::vector<Elem> to_existing(cross[k]);
    for (std::size_t prev : kept) to_existing.push_back(f2.d(layout.new_in_f2[k], layout.new_in_f2[prev]));
    result.space.add_point(f2.point(layout.new_in_f2[k]), to_existing);
    kept.push_back(k);
  }
  return result;
}

bool has_pseudo_completion(const LambdaSpace& base, const LambdaSpace& f1, const LambdaSpace& f2) {
  const FiniteLattice& lat = f1.lattice();
  const Layout layout = layout_of(base, f1, f2);
  // Joint index space: f1 points, then f2's new points.
  const std::size_t n1 = f1.size();
  const std::size_t n = n1 + layout.new_in_f2.size();
  constexpr Elem kUnknown = 0xFF;
  std::vector<Elem> m(n * n, kUnknown);
  auto at = [&](std::size_t i, std::size_t j) -> Elem& { return m[i * n + j]; };
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n1; ++j) at(i, j) = f1.d(i, j);
  }
  for (std::size_t k = 0; k < layout.new_in_f2.size(); ++k) {
    const std::size_t b = layout.new_in_f2[k];
    for (std::size_t c = 0; c < layout.base_in_f1.size(); ++c) {
      at(n1 + k, layout.base_in_f1[c]) = at(layout.base_in_f1[c], n1 + k) = f2.d(b, layout.base_in_f2[c]);
    }
    for (std::size_t l = 0; l < layout.new_in_f2.size(); ++l) at(n1 + k, n1 + l) = f2.d(b, layout.new_in_f2[l]);
  }
  std::vector<std::pair<std::size_t, std::size_t>> open;
  for (std::size_t a : layout.new_in_f1) {
    for (std::size_t k = 0; k < layout.new_in_f2.size(); ++k) open.emplace_back(a, n1 + k);
  }
  // Every triangle through (x,y) whose edges are all known.
  auto consistent = [&](std::size_t x, std::size_t y) {
    for (std::size_t z = 0; z < n; ++z) {
      const Elem xz = at(x, z);
      const Elem yz = at(y, z);
      if (xz == kUnknown || yz == kUnknown) continue;
      const Elem xy = at(x, y);
      if (!lat.leq(xy, lat.join(xz, yz)) || !lat.leq(xz, lat.join(xy, yz)) || !lat.leq(yz, lat.join(xy, xz))) {
        return false;
      }
    }
    return true;
  };
  // The formula values are the only candidates worth trying first: they
  // dominate every valid completion.
  for (const auto& [x, y] : open) {
    Elem acc = lat.top();
    for (std::size_t c = 0; c < layout.base_in_f1.size(); ++c) {
      acc = lat.meet(acc, lat.join(at(x, layout.base_in_f1[c]), at(layout.base_in_f1[c], y)));
    }
    at(x, y) = at(y, x) = acc;
  }
  bool formula_ok = true;
  for (const auto& [x, y] : open) formula_ok = formula_ok && consistent(x, y);
  if (formula_ok) return true;
  for (const auto& [x, y] : open) at(x, y) = at(y, x) = kUnknown;

  std::function<bool(std::size_t)> rec = [&](std::size_t idx) {
    if (idx == open.size()) return true;
    const auto [x, y] = open[idx];
    for (std::size_t v = 0; v < lat.size(); ++v) {
      at(x, y) = at(y, x) = static_cast<Elem>(v);
      if (consistent(x, y) && rec(idx + 1)) return true;
    }
    at(x, y) = at(y, x) = kUnknown;
    return false;
  };
  return rec(0);
}

std::optional<AmalgamationFailure> amalgamation_failure_probe(const LatticeRef& lattice) {
  std::optional<AmalgamationFailure> found;
  const bool distributive = is_distributive(*lattice).distributive;
  for (std::size_t base_size = 0; base_size <= kProbeMaxBase && !found; ++base_size) {
    for (std::size_t new1 = 1; new1 <= kProbeMaxNew && !found; ++new1) {
      for (std::size_t new2 = 1; new2 <= kProbeMaxNew && !found; ++new2) {
        for_each_space(lattice, base_size, [&](const LambdaSpace& base) {
          // Factors extend the base by new1 (resp. new2) points with ids
          // continuing after the base, f2's ids after f1's.
          std::vector<LambdaSpace> left;
          std::vector<LambdaSpace> right;
          std::function<void(const LambdaSpace&, std::size_t, PointId, std::vector<LambdaSpace>&)> grow =
              [&](const LambdaSpace& s, std::size_t remaining, PointId next_id, std::vector<LambdaSpace>& out) {
                if (remaining == 0) {
                  out.push_back(s);
                  return;
                }
                for_each_extension(s, [&](std::span<const Elem> ext) {
                  LambdaSpace t = s;
                  t.add_point(next_id, ext);
                  grow(t, remaining - 1, next_id + 1, out);
                  return true;
                });
              };
          const PointId first1 = static_cast<PointId>(base_size);
          grow(base, new1, first1, left);
          grow(base, new2, first1 + static_cast<PointId>(new1), right);
          for (const LambdaSpace& f1 : left) {
            for (const LambdaSpace& f2 : right) {
              if (distributive) {
                // The formula completion always works here; confirm it.
                const AmalgamResult r = canonical_amalgam(base, f1, f2);
                if (validate_space(r.space).ok()) continue;
              }
              if (!has_pseudo_completion(base, f1, f2)) {
                found = AmalgamationFailure{base, f1, f2};
                return false;
              }
            }
          }
          return true;
        });
      }
    }
  }
  return found;
}

}  // namespace permlat
