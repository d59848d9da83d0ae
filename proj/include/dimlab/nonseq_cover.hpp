#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dimlab/core.hpp"

namespace dimlab {

inline constexpr int kCoverExactCap = 20;
inline constexpr int kPackingExactCap = 25;

// An l_inf cover: center vectors over the grid plus the function -> center
// assignment, each function within alpha of its center coordinate-wise.
struct CoverSet {
  std::vector<std::vector<int64_t>> centers;
  std::vector<int> assignment;
};

struct CoverResult {
  BigInt size = 0;
  CoverSet cover;
};

struct PackingResult {
  int size = 0;
  std::vector<int> subset;
};

namespace detail {

// Per design coordinate, the set of feasible alphabet centers for one value,
// as a bitmask over alphabet indices. A group of functions is coverable by
// one center iff the AND of its members' masks is nonzero per coordinate.
struct CenterMasks {
  const FunctionClass& cls;
  const SampleDesign& design;
  std::vector<std::vector<uint64_t>> mask;  // [coordinate][alphabet index of value]

  CenterMasks(const FunctionClass& c, const SampleDesign& d, const Metric& metric,
              const Rational& alpha)
      : cls(c), design(d) {
    const int64_t a = cls.grid().alphabet_size();
    if (a > 64) throw std::invalid_argument("alphabet too large for cover search");
    mask.assign(design.size(), std::vector<uint64_t>(static_cast<size_t>(a), 0));
    for (size_t t = 0; t < design.size(); ++t)
      for (int64_t vi = 0; vi < a; ++vi) {
        uint64_t bits = 0;
        for (int64_t ci = 0; ci < a; ++ci) {
          const Rational d_vc = metric.dist_nums(cls.grid(), cls.grid().numerator_at(vi),
                                                 cls.grid().numerator_at(ci));
          if (d_vc <= alpha) bits |= (uint64_t{1} << ci);
        }
        mask[t][static_cast<size_t>(vi)] = bits;
      }
  }

  uint64_t of(int f, size_t t) const {
    const int64_t v = cls.value_num(f, design.indices[t]);
    return mask[t][static_cast<size_t>(cls.grid().index_of(v))];
  }
};

struct Group {
  std::vector<uint64_t> feasible;  // per coordinate
  std::vector<int> members;

  bool compatible(const CenterMasks& cm, int f) const {
    for (size_t t = 0; t < feasible.size(); ++t)
      if ((feasible[t] & cm.of(f, t)) == 0) return false;
    return true;
  }

  void add(const CenterMasks& cm, int f) {
    for (size_t t = 0; t < feasible.size(); ++t) feasible[t] &= cm.of(f, t);
    members.push_back(f);
  }
};

inline Group fresh_group(size_t n) {
  Group g;
  g.feasible.assign(n, ~uint64_t{0});
  return g;
}

// Center for a finalized group: the feasible grid value nearest the midpoint
// of the member values (absolute difference), or the smallest feasible value
// for tabulated metrics. Ties break toward the smaller value.
inline std::vector<int64_t> pick_center(const CenterMasks& cm, const Metric& metric,
                                        const Group& g) {
  const ValueGrid& grid = cm.cls.grid();
  std::vector<int64_t> center(cm.design.size());
  for (size_t t = 0; t < cm.design.size(); ++t) {
    const uint64_t bits = g.feasible[t];
    if (bits == 0) throw std::logic_error("infeasible group");
    if (metric.kind() == Metric::Kind::AbsoluteDifference) {
      Rational lo = grid.max_value(), hi = grid.min_value();
      for (int f : g.members) {
        const Rational v = cm.cls.value(f, cm.design.indices[t]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const Rational mid = (lo + hi) / 2;
      bool have = false;
      int64_t best = 0;
      Rational best_err;
      for (int64_t ci = 0; ci < grid.alphabet_size(); ++ci) {
        if (!((bits >> ci) & 1)) continue;
        const int64_t v = grid.numerator_at(ci);
        const Rational err = abs_rat(grid.value(v) - mid);
        if (!have || err < best_err) {
          have = true;
          best = v;
          best_err = err;
        }
      }
      center[t] = best;
    } else {
      center[t] = grid.numerator_at(static_cast<int64_t>(__builtin_ctzll(bits)));
    }
  }
  return center;
}

inline CoverSet finalize_cover(const CenterMasks& cm, const Metric& metric,
                               const std::vector<Group>& groups) {
  CoverSet cover;
  cover.assignment.assign(static_cast<size_t>(cm.cls.n_functions()), -1);
  for (const Group& g : groups) {
    for (int f : g.members) cover.assignment[static_cast<size_t>(f)] = static_cast<int>(cover.centers.size());
    cover.centers.push_back(pick_center(cm, metric, g));
  }
  return cover;
}

struct CoverBranch {
  const CenterMasks& cm;
  const std::vector<int>& order;
  std::vector<Group> groups;
  std::vector<Group> best;
  size_t best_size;

  void run(size_t i) {
    if (groups.size() >= best_size) return;
    if (i == order.size()) {
      best = groups;
      best_size = groups.size();
      return;
    }
    const int f = order[i];
    for (size_t g = 0; g < groups.size(); ++g) {
      if (!groups[g].compatible(cm, f)) continue;
      Group saved = groups[g];
      groups[g].add(cm, f);
      run(i + 1);
      groups[g] = std::move(saved);
    }
    if (groups.size() + 1 < best_size) {
      groups.push_back(fresh_group(cm.design.size()));
      groups.back().add(cm, f);
      run(i + 1);
      groups.pop_back();
    }
  }
};

inline std::vector<Group> greedy_groups(const CenterMasks& cm) {
  const int n_f = cm.cls.n_functions();
  std::vector<bool> covered(static_cast<size_t>(n_f), false);
  std::vector<Group> groups;
  for (int f = 0; f < n_f; ++f) {
    if (covered[static_cast<size_t>(f)]) continue;
    Group g = fresh_group(cm.design.size());
    g.add(cm, f);
    covered[static_cast<size_t>(f)] = true;
    for (int h = f + 1; h < n_f; ++h) {
      if (covered[static_cast<size_t>(h)] || !g.compatible(cm, h)) continue;
      g.add(cm, h);
      covered[static_cast<size_t>(h)] = true;
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace detail

inline void validate_design(const FunctionClass& cls, const SampleDesign& design) {
  if (design.size() == 0) throw std::invalid_argument("design must be nonempty");
  for (int x : design.indices)
    if (x < 0 || x >= cls.n_points()) throw std::out_of_range("design index out of range");
}

inline bool is_cover(const FunctionClass& cls, const SampleDesign& design, const Metric& metric,
                     const Rational& alpha, const CoverSet& cover) {
  if (cover.assignment.size() != static_cast<size_t>(cls.n_functions())) return false;
  for (int f = 0; f < cls.n_functions(); ++f) {
    const int c = cover.assignment[static_cast<size_t>(f)];
    if (c < 0 || c >= static_cast<int>(cover.centers.size())) return false;
    for (size_t t = 0; t < design.size(); ++t) {
      const Rational d = metric.dist_nums(cls.grid(), cls.value_num(f, design.indices[t]),
                                          cover.centers[static_cast<size_t>(c)][t]);
      if (d > alpha) return false;
    }
  }
  return true;
}

// Minimum cover via branch and bound over functions in decreasing
// eccentricity order, with the greedy cover as incumbent.
inline CoverResult cover_min_exact(const FunctionClass& cls, const SampleDesign& design,
                                   const Metric& metric, const Rational& alpha) {
  validate_design(cls, design);
  if (cls.n_functions() > kCoverExactCap)
    throw std::invalid_argument("class too large for exact cover; use cover_greedy");
  detail::CenterMasks cm(cls, design, metric, alpha);

  std::vector<Rational> ecc(static_cast<size_t>(cls.n_functions()), 0);
  for (int f = 0; f < cls.n_functions(); ++f)
    for (int g = 0; g < cls.n_functions(); ++g) {
      Rational d = 0;
      for (size_t t = 0; t < design.size(); ++t)
        d = std::max(d, metric.dist_nums(cls.grid(), cls.value_num(f, design.indices[t]),
                                         cls.value_num(g, design.indices[t])));
      ecc[static_cast<size_t>(f)] = std::max(ecc[static_cast<size_t>(f)], d);
    }
  std::vector<int> order(static_cast<size_t>(cls.n_functions()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ecc[static_cast<size_t>(a)] > ecc[static_cast<size_t>(b)]; });

  detail::CoverBranch branch{cm, order, {}, detail::greedy_groups(cm), 0};
  branch.best_size = branch.best.size();
  branch.run(0);

  CoverResult result;
  result.cover = detail::finalize_cover(cm, metric, branch.best);
  result.size = branch.best.size();
  return result;
}

// First-fit greedy cover; valid for any class size.
inline CoverResult cover_greedy(const FunctionClass& cls, const SampleDesign& design,
                                const Metric& metric, const Rational& alpha) {
  validate_design(cls, design);
  detail::CenterMasks cm(cls, design, metric, alpha);
  CoverResult result;
  auto groups = detail::greedy_groups(cm);
  result.cover = detail::finalize_cover(cm, metric, groups);
  result.size = groups.size();
  return result;
}

// Largest pairwise >= alpha separated subset (max clique on the separation
// graph), by branch and bound in index order.
inline PackingResult packing_max_exact(const FunctionClass& cls, const SampleDesign& design,
                                       const Metric& metric, const Rational& alpha) {
  validate_design(cls, design);
  const int n_f = cls.n_functions();
  if (n_f > kPackingExactCap) throw std::invalid_argument("class too large for exact packing");

  std::vector<uint32_t> adj(static_cast<size_t>(n_f), 0);
  for (int f = 0; f < n_f; ++f)
    for (int g = f + 1; g < n_f; ++g) {
      Rational d = 0;
      for (size_t t = 0; t < design.size(); ++t)
        d = std::max(d, metric.dist_nums(cls.grid(), cls.value_num(f, design.indices[t]),
                                         cls.value_num(g, design.indices[t])));
      if (d >= alpha) {
        adj[static_cast<size_t>(f)] |= (uint32_t{1} << g);
        adj[static_cast<size_t>(g)] |= (uint32_t{1} << f);
      }
    }

  std::vector<int> best, cur;
  auto extend = [&](auto&& self, uint32_t cand) -> void {
    if (cur.size() + static_cast<size_t>(__builtin_popcount(cand)) <= best.size()) return;
    if (cand == 0) {
      if (cur.size() > best.size()) best = cur;
      return;
    }
    const int v = __builtin_ctz(cand);
    cur.push_back(v);
    self(self, cand & adj[static_cast<size_t>(v)] & ~((uint32_t{1} << (v + 1)) - 1));
    cur.pop_back();
    self(self, cand & ~(uint32_t{1} << v));
  };
  extend(extend, n_f >= 32 ? ~uint32_t{0} : (uint32_t{1} << n_f) - 1);

  return {static_cast<int>(best.size()), best};
}

}  // namespace dimlab
