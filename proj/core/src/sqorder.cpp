#include "permlat/sqorder.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace permlat {
namespace {

std::string pid(const LambdaSpace& s, std::size_t i) { return std::to_string(s.point(i)); }

}  // namespace

SubquotientOrder SubquotientOrder::normalized(const LambdaSpace& space, Elem bottom, Elem top,
                                              std::span<const int> raw) {
  if (raw.size() != space.size()) throw Error(ErrorCode::kInvalidOrder, "rank count does not match the space");
  const std::vector<int> top_class = class_labels(space, top);
  std::map<int, std::vector<int>> seen;
  for (std::size_t i = 0; i < raw.size(); ++i) seen[top_class[i]].push_back(raw[i]);
  for (auto& [cls, values] : seen) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
  }
  std::vector<int> ranks(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& values = seen[top_class[i]];
    ranks[i] = static_cast<int>(std::lower_bound(values.begin(), values.end(), raw[i]) - values.begin());
  }
  return SubquotientOrder(bottom, top, std::move(ranks));
}

ValidationReport validate_sqorder(const LambdaSpace& space, const SubquotientOrder& o) {
  ValidationReport report;
  const FiniteLattice& lat = space.lattice();
  if (o.bottom() >= lat.size() || o.top() >= lat.size()) {
    report.add("unknown_element", {});
    return report;
  }
  if (!lat.leq(o.bottom(), o.top())) report.add("bottom_not_below_top", {lat.name(o.bottom()), lat.name(o.top())});
  if (o.ranks().size() != space.size()) {
    report.add("rank_count", {}, "one rank per point is required");
    return report;
  }
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (std::size_t y = x + 1; y < space.size(); ++y) {
      const Elem dxy = space.d(x, y);
      if (lat.leq(dxy, o.bottom()) && o.rank(x) != o.rank(y)) {
        report.add("rank_not_constant_on_class", {pid(space, x), pid(space, y)});
      } else if (lat.leq(dxy, o.top()) && !lat.leq(dxy, o.bottom()) && o.rank(x) == o.rank(y)) {
        report.add("rank_tie", {pid(space, x), pid(space, y)});
      }
    }
  }
  return report;
}

ValidationReport validate_order_relation(const LambdaSpace& space, Elem bottom, Elem top,
                                         const std::vector<bool>& less) {
  ValidationReport report;
  const FiniteLattice& lat = space.lattice();
  const std::size_t n = space.size();
  auto lt = [&](std::size_t x, std::size_t y) { return less[x * n + y]; };
  auto same = [&](Elem rel, std::size_t x, std::size_t y) { return lat.leq(space.d(x, y), rel); };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const std::vector<std::string> w{pid(space, x), pid(space, y)};
      if (same(bottom, x, y) && lt(x, y)) report.add("related_within_bottom_class", w);
      if (lt(x, y) && lt(y, x)) report.add("not_antisymmetric", w);
      if (!same(bottom, x, y)) {
        const bool related = lt(x, y) || lt(y, x);
        if (related && !same(top, x, y)) report.add("comparable_across_top_classes", w);
        if (!related && same(top, x, y) && x < y) report.add("incomparable_within_top_class", w);
      }
      for (std::size_t z = 0; z < n; ++z) {
        if (lt(x, y) && lt(y, z) && !lt(x, z)) report.add("not_transitive", {w[0], w[1], pid(space, z)});
      }
    }
  }
  // Invariance: x<y and x' E x, y' E y force x'<y'.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (!lt(x, y)) continue;
      for (std::size_t x2 = 0; x2 < n; ++x2) {
        if (!same(bottom, x, x2)) continue;
        for (std::size_t y2 = 0; y2 < n; ++y2) {
          if (same(bottom, y, y2) && !lt(x2, y2)) {
            report.add("not_class_invariant", {pid(space, x), pid(space, y), pid(space, x2), pid(space, y2)});
          }
        }
      }
    }
  }
  return report;
}

std::vector<bool> pullback(const LambdaSpace& space, const SubquotientOrder& o) {
  const std::size_t n = space.size();
  std::vector<bool> less(n * n, false);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) less[x * n + y] = o.less(space, x, y);
  }
  return less;
}

Restriction restrict_to(const LambdaSpace& space, const SubquotientOrder& o, Elem g) {
  const FiniteLattice& lat = space.lattice();
  if (!lat.leq(g, o.top())) {
    throw Error(ErrorCode::kUndefinedRestriction,
                "restriction to " + lat.name(g) + " needs it below the top relation " + lat.name(o.top()));
  }
  const RestrictionMode mode = lat.leq(o.bottom(), g) ? RestrictionMode::kTopLowering : RestrictionMode::kCross;
  return {SubquotientOrder::normalized(space, lat.meet(o.bottom(), g), g, o.ranks()), mode};
}

SubquotientOrder compose_lex(const LambdaSpace& space, const SubquotientOrder& lo, const SubquotientOrder& hi) {
  if (lo.top() != hi.bottom()) {
    const FiniteLattice& lat = space.lattice();
    throw Error(ErrorCode::kTopBottomMismatch,
                "lower order ends at " + lat.name(lo.top()) + " but upper order starts at " + lat.name(hi.bottom()));
  }
  // Composite key (hi rank, lo rank); lo ranks are below n.
  const int scale = static_cast<int>(space.size()) + 1;
  std::vector<int> raw(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) raw[i] = hi.rank(i) * scale + lo.rank(i);
  return SubquotientOrder::normalized(space, lo.bottom(), hi.top(), raw);
}

ConvexityResult convexity_check(const LambdaSpace& space, const SubquotientOrder& o, Elem g) {
  const FiniteLattice& lat = space.lattice();
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      if (!o.less(space, x, z)) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (o.less(space, z, y) && lat.leq(space.d(x, y), g) && !lat.leq(space.d(z, x), g)) {
          return {false, std::array<std::size_t, 3>{x, z, y}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

SplitResult split_convex_linear(const LambdaSpace& space, const SubquotientOrder& o, Elem e) {
  const FiniteLattice& lat = space.lattice();
  if (!lat.leq(o.bottom(), e) || !lat.leq(e, o.top())) {
    throw Error(ErrorCode::kPrecondition, "split point " + lat.name(e) + " must lie between bottom and top");
  }
  const ConvexityResult conv = convexity_check(space, o, e);
  if (!conv.convex) {
    const auto& w = *conv.witness;
    throw Error(ErrorCode::kNotConvex, "classes of " + lat.name(e) + " interleave at " + pid(space, w[0]) + " < " +
                                           pid(space, w[1]) + " < " + pid(space, w[2]));
  }
  SubquotientOrder within = restrict_to(space, o, e).order;
  // A convex e-class occupies an interval of ranks; order classes by its start.
  const std::vector<int> e_class = class_labels(space, e);
  std::map<int, int> start;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto [it, fresh] = start.emplace(e_class[i], o.rank(i));
    if (!fresh) it->second = std::min(it->second, o.rank(i));
  }
  std::vector<int> raw(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) raw[i] = start[e_class[i]];
  SubquotientOrder between = SubquotientOrder::normalized(space, e, o.top(), raw);
  return {std::move(within), std::move(between)};
}

SubquotientOrder reversed(const LambdaSpace& space, const SubquotientOrder& o) {
  std::vector<int> raw(o.ranks());
  for (int& r : raw) r = -r;
  return SubquotientOrder::normalized(space, o.bottom(), o.top(), raw);
}

ValidationReport validate_structure(const OrderedLambdaStructure& s) {
  ValidationReport report = validate_space(s.space);
  for (std::size_t i = 0; i < s.orders.size(); ++i) {
    for (auto& v : validate_sqorder(s.space, s.orders[i]).violations) {
      report.add("order " + std::to_string(i) + ": " + v.kind, std::move(v.witness), std::move(v.detail));
    }
  }
  return report;
}

}  // namespace permlat
