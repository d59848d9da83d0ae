#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "dimlab/combinatorics.hpp"
#include "dimlab/core.hpp"

namespace dimlab {

enum class ShatterKind { GappedInteger, GappedReal, Fat, FixedScale };

// Shattered points, their witnesses, and one realizer function per sign
// pattern (indexed by pattern_index). Re-checkable via is_shattered_nonseq.
struct ShatterCertificate {
  SampleDesign points;
  std::vector<WitnessPair> witnesses;
  std::vector<int> realizers;
};

struct DimResult {
  int dim = 0;
  ShatterCertificate certificate;
};

namespace detail {

constexpr uint8_t kAllowNeg = 1;
constexpr uint8_t kAllowPos = 2;

// Whether sign eps may be assigned to f at a point with witness s.
inline uint8_t allowed_signs(ShatterKind kind, const Metric& metric, const ValueGrid& grid,
                             const Rational& value, const WitnessPair& s, const Rational& alpha,
                             const Rational& beta) {
  uint8_t mask = 0;
  switch (kind) {
    case ShatterKind::GappedInteger:
      if (value == s.lo) mask |= kAllowNeg;
      if (value == s.hi) mask |= kAllowPos;
      break;
    case ShatterKind::GappedReal:
      if (metric.dist(grid, value, s.lo) <= beta) mask |= kAllowNeg;
      if (metric.dist(grid, value, s.hi) <= beta) mask |= kAllowPos;
      break;
    case ShatterKind::Fat:
      if (s.lo - value >= alpha / 2) mask |= kAllowNeg;
      if (value - s.hi >= alpha / 2) mask |= kAllowPos;
      break;
    case ShatterKind::FixedScale:
      if (s.lo - value == alpha / 2) mask |= kAllowNeg;
      if (value - s.hi == alpha / 2) mask |= kAllowPos;
      break;
  }
  return mask;
}

// Tests whether the union over functions of the per-level sign products
// covers all 2^d patterns; optionally emits the lowest-index realizer per
// pattern. masks[f][t] holds the allowed signs of function f at level t.
inline bool covers_all_patterns(int d, const std::vector<std::vector<uint8_t>>& masks,
                                std::vector<int>* realizers_out) {
  const size_t universe = size_t{1} << d;
  std::vector<int> realizers(universe, -1);
  size_t covered = 0;
  std::vector<uint32_t> cur, next;
  for (size_t f = 0; f < masks.size() && covered < universe; ++f) {
    bool dead = false;
    for (int t = 0; t < d; ++t)
      if (masks[f][static_cast<size_t>(t)] == 0) {
        dead = true;
        break;
      }
    if (dead) continue;
    cur.assign(1, 0);
    for (int t = 0; t < d; ++t) {
      const uint8_t m = masks[f][static_cast<size_t>(t)];
      next.clear();
      for (uint32_t idx : cur) {
        if (m & kAllowNeg) next.push_back(2 * idx);
        if (m & kAllowPos) next.push_back(2 * idx + 1);
      }
      cur.swap(next);
    }
    for (uint32_t idx : cur)
      if (realizers[idx] < 0) {
        realizers[idx] = static_cast<int>(f);
        ++covered;
      }
  }
  if (covered < universe) return false;
  if (realizers_out) *realizers_out = std::move(realizers);
  return true;
}

inline Rational clamp_to_range(const Rational& v, const ValueGrid& grid) {
  if (v < grid.min_value()) return grid.min_value();
  if (v > grid.max_value()) return grid.max_value();
  return v;
}

// Canonical scalar witness candidates for fat and fixed-scale shattering:
// attained values shifted by -alpha/2 and +alpha/2, clamped to the range.
// Every equivalence class of witnesses contains one of these.
inline std::vector<Rational> scalar_witness_candidates(const FunctionClass& cls, int x,
                                                       const Rational& alpha) {
  std::set<Rational> out;
  for (int64_t v : cls.attained_at(x)) {
    const Rational value = cls.grid().value(v);
    out.insert(clamp_to_range(value - alpha / 2, cls.grid()));
    out.insert(clamp_to_range(value + alpha / 2, cls.grid()));
  }
  return {out.begin(), out.end()};
}

// Witness value candidates for the real gapped dimension. Under absolute
// difference the subclass within beta of s is constant between breakpoints
// v +- beta, so these values preserve exactness. For tabulated metrics the
// candidates stay on attained values and the result is a lower bound.
inline std::vector<Rational> gapped_real_witness_candidates(const FunctionClass& cls,
                                                            const Metric& metric, int x,
                                                            const Rational& beta) {
  std::set<Rational> out;
  for (int64_t v : cls.attained_at(x)) {
    const Rational value = cls.grid().value(v);
    out.insert(value);
    if (metric.kind() == Metric::Kind::AbsoluteDifference) {
      out.insert(clamp_to_range(value - beta, cls.grid()));
      out.insert(clamp_to_range(value + beta, cls.grid()));
    }
  }
  return {out.begin(), out.end()};
}

// Ordered witness pairs with gap >= alpha, lexicographic by (lo, hi).
inline std::vector<WitnessPair> witness_pair_candidates(const FunctionClass& cls,
                                                        const Metric& metric, ShatterKind kind,
                                                        int x, const Rational& alpha,
                                                        const Rational& beta) {
  std::vector<WitnessPair> pairs;
  if (kind == ShatterKind::Fat || kind == ShatterKind::FixedScale) {
    for (const Rational& s : scalar_witness_candidates(cls, x, alpha)) pairs.push_back({s, s});
    return pairs;
  }
  std::vector<Rational> values;
  if (kind == ShatterKind::GappedInteger) {
    for (int64_t v : cls.attained_at(x)) values.push_back(cls.grid().value(v));
  } else {
    values = gapped_real_witness_candidates(cls, metric, x, beta);
  }
  for (const Rational& lo : values)
    for (const Rational& hi : values)
      if (metric.dist(cls.grid(), hi, lo) >= alpha) pairs.push_back({lo, hi});
  return pairs;
}

// Per point: the candidate witness pairs and, for each pair, the allowed
// signs of every alphabet value. Precomputed once per dimension query so the
// subset search runs on table lookups only. Pairs whose sign table repeats
// an earlier pair's are dropped (they shatter exactly the same sets); the
// lexicographically first representative is kept.
struct PointTable {
  std::vector<WitnessPair> pairs;
  std::vector<std::vector<uint8_t>> allowed;  // [pair][alphabet index]
};

inline PointTable build_point_table(const FunctionClass& cls, const Metric& metric,
                                    ShatterKind kind, int x, const Rational& alpha,
                                    const Rational& beta) {
  PointTable table;
  std::set<std::vector<uint8_t>> seen;
  for (const WitnessPair& s : witness_pair_candidates(cls, metric, kind, x, alpha, beta)) {
    std::vector<uint8_t> row(static_cast<size_t>(cls.grid().alphabet_size()), 0);
    bool any_lo = false, any_hi = false;
    for (int64_t i = 0; i < cls.grid().alphabet_size(); ++i) {
      const Rational v = cls.grid().value(cls.grid().numerator_at(i));
      row[static_cast<size_t>(i)] = allowed_signs(kind, metric, cls.grid(), v, s, alpha, beta);
      any_lo |= (row[static_cast<size_t>(i)] & kAllowNeg) != 0;
      any_hi |= (row[static_cast<size_t>(i)] & kAllowPos) != 0;
    }
    if (!any_lo || !any_hi) continue;
    if (!seen.insert(row).second) continue;
    table.pairs.push_back(s);
    table.allowed.push_back(std::move(row));
  }
  return table;
}

struct NonseqSearch {
  const FunctionClass& cls;
  const std::vector<PointTable>& tables;
  const std::vector<std::vector<int>>& value_index;  // [x][f] alphabet index

  std::vector<int> points;
  std::vector<size_t> chosen;               // pair index per level
  std::vector<std::vector<uint8_t>> masks;  // [f][level]

  bool search_witnesses(size_t level, ShatterCertificate* cert) {
    const int d = static_cast<int>(points.size());
    if (level == points.size()) {
      std::vector<int> realizers;
      if (!covers_all_patterns(d, masks, &realizers)) return false;
      cert->points.indices = points;
      for (size_t t = 0; t < points.size(); ++t)
        cert->witnesses.push_back(tables[static_cast<size_t>(points[t])].pairs[chosen[t]]);
      cert->realizers = std::move(realizers);
      return true;
    }
    const PointTable& table = tables[static_cast<size_t>(points[level])];
    const std::vector<int>& vidx = value_index[static_cast<size_t>(points[level])];
    for (size_t pi = 0; pi < table.pairs.size(); ++pi) {
      for (int f = 0; f < cls.n_functions(); ++f)
        masks[static_cast<size_t>(f)][level] =
            table.allowed[pi][static_cast<size_t>(vidx[static_cast<size_t>(f)])];
      // prune unless every pattern over the assigned levels is reachable
      if (covers_all_patterns(static_cast<int>(level) + 1, masks, nullptr)) {
        chosen[level] = pi;
        if (search_witnesses(level + 1, cert)) return true;
      }
    }
    return false;
  }

  bool search_subset(int d, int first, ShatterCertificate* cert) {
    if (static_cast<int>(points.size()) == d) {
      for (int x : points)
        if (tables[static_cast<size_t>(x)].pairs.empty()) return false;
      masks.assign(static_cast<size_t>(cls.n_functions()), std::vector<uint8_t>(points.size(), 0));
      chosen.assign(points.size(), 0);
      return search_witnesses(0, cert);
    }
    for (int x = first; x < cls.n_points(); ++x) {
      points.push_back(x);
      if (search_subset(d, x + 1, cert)) return true;
      points.pop_back();
    }
    return false;
  }
};

inline DimResult nonseq_dim(const FunctionClass& cls, const Metric& metric, ShatterKind kind,
                            const Rational& alpha, const Rational& beta) {
  std::vector<PointTable> tables;
  std::vector<std::vector<int>> value_index;
  for (int x = 0; x < cls.n_points(); ++x) {
    tables.push_back(build_point_table(cls, metric, kind, x, alpha, beta));
    std::vector<int> vidx(static_cast<size_t>(cls.n_functions()));
    for (int f = 0; f < cls.n_functions(); ++f)
      vidx[static_cast<size_t>(f)] = static_cast<int>(cls.grid().index_of(cls.value_num(f, x)));
    value_index.push_back(std::move(vidx));
  }

  DimResult result;
  result.certificate.realizers = {0};  // the empty pattern, realized by any function
  const int max_d = std::min(cls.n_points(), 20);
  for (int d = 1; d <= max_d; ++d) {
    NonseqSearch search{cls, tables, value_index, {}, {}, {}};
    ShatterCertificate cert;
    if (!search.search_subset(d, 0, &cert)) break;  // subsets of shattered sets shatter
    result.dim = d;
    result.certificate = std::move(cert);
  }
  return result;
}

}  // namespace detail

// Largest d with a size-d subset of X shattered in the integer gapped sense:
// witness pairs with gap >= alpha, realizers landing exactly on the pair.
inline DimResult gapped_dim_integer(const FunctionClass& cls, const Metric& metric,
                                    const Rational& alpha) {
  if (!cls.grid().is_integer()) throw std::invalid_argument("needs an integer-alphabet class");
  if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  return detail::nonseq_dim(cls, metric, ShatterKind::GappedInteger, alpha, 0);
}

// Real-valued gapped scale-sensitive dimension at scale (alpha, beta),
// with witnesses drawn from the canonical candidate set.
inline DimResult gapped_dim_real(const FunctionClass& cls, const Metric& metric,
                                 const Rational& alpha, const Rational& beta) {
  if (cls.grid().is_integer()) throw std::invalid_argument("needs a real-grid class");
  if (alpha <= 0 || beta <= 0) throw std::invalid_argument("alpha, beta must be > 0");
  return detail::nonseq_dim(cls, metric, ShatterKind::GappedReal, alpha, beta);
}

// Scale-sensitive dimension vc(F, alpha): one scalar witness per point,
// margin alpha/2 on each side. The certificate stores s as lo == hi.
inline DimResult fat_dim(const FunctionClass& cls, const Rational& alpha) {
  if (cls.grid().is_integer()) throw std::invalid_argument("needs a real-grid class");
  if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  return detail::nonseq_dim(cls, Metric::absolute_difference(), ShatterKind::Fat, alpha, 0);
}

// As fat_dim with the margin inequality replaced by exact equality.
inline DimResult fixed_scale_dim(const FunctionClass& cls, const Rational& alpha) {
  if (cls.grid().is_integer()) throw std::invalid_argument("needs a real-grid class");
  if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  return detail::nonseq_dim(cls, Metric::absolute_difference(), ShatterKind::FixedScale, alpha, 0);
}

struct ShatterCheck {
  bool shattered = false;
  std::vector<int> realizers;
};

// Re-checks a (points, witnesses) proposal: gap condition at every
// coordinate and realizability of all 2^d sign patterns.
inline ShatterCheck is_shattered_nonseq(ShatterKind kind, const FunctionClass& cls,
                                        const Metric& metric, const SampleDesign& points,
                                        const std::vector<WitnessPair>& witnesses,
                                        const Rational& alpha, const Rational& beta = 0) {
  if (points.size() != witnesses.size())
    throw std::invalid_argument("points/witnesses dimension mismatch");
  const int d = static_cast<int>(points.size());
  if (d > 20) throw std::invalid_argument("dimension above the 2^20 pattern cap");
  for (int x : points.indices)
    if (x < 0 || x >= cls.n_points()) throw std::out_of_range("point index out of range");

  ShatterCheck check;
  for (const WitnessPair& s : witnesses) {
    if (kind == ShatterKind::Fat || kind == ShatterKind::FixedScale) {
      if (s.lo != s.hi) throw std::invalid_argument("scalar shattering needs lo == hi");
    } else if (metric.dist(cls.grid(), s.hi, s.lo) < alpha) {
      return check;  // gap condition fails
    }
  }
  std::vector<std::vector<uint8_t>> masks(static_cast<size_t>(cls.n_functions()),
                                          std::vector<uint8_t>(static_cast<size_t>(d), 0));
  for (int f = 0; f < cls.n_functions(); ++f)
    for (int t = 0; t < d; ++t)
      masks[static_cast<size_t>(f)][static_cast<size_t>(t)] =
          detail::allowed_signs(kind, metric, cls.grid(),
                                cls.value(f, points.indices[static_cast<size_t>(t)]),
                                witnesses[static_cast<size_t>(t)], alpha, beta);
  check.shattered = detail::covers_all_patterns(d, masks, &check.realizers);
  if (!check.shattered) check.realizers.clear();
  return check;
}

}  // namespace dimlab
