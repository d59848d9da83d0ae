#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "dimlab/combinatorics.hpp"
#include "dimlab/core.hpp"
#include "dimlab/nonseq_dims.hpp"
#include "dimlab/tree.hpp"

namespace dimlab {

// Witness trees pair with an X-valued tree; realizers map each depth-d sign
// path (by pattern_index) to a function index.
struct TreeShatterCertificate {
  LabeledTree<int> x_tree;
  LabeledTree<WitnessPair> witness_tree;
  std::vector<int> realizers;
};

struct SeqDimResult {
  int dim = 0;
  TreeShatterCertificate certificate;
};

// A sequential cover: grid-valued trees, one value per node.
struct SeqCoverSet {
  std::vector<LabeledTree<int64_t>> trees;
};

enum class SeqKind { GappedInteger, GappedReal, Sfat };

namespace detail {

struct SeqChoice {
  int x = -1;
  WitnessPair pair;
  std::vector<int> lo_rows;
  std::vector<int> hi_rows;
};

struct SeqMemoEntry {
  int dim = 0;
  std::optional<SeqChoice> choice;
};

// Littlestone-style recursion dim(G) = max over x and witness pairs of
// 1 + min(dim(G_lo), dim(G_hi)), memoized on the subclass row set.
class SeqDimContext {
 public:
  SeqDimContext(const FunctionClass& cls, const Metric& metric, SeqKind kind, Rational alpha,
                Rational beta)
      : cls_(cls), metric_(metric), kind_(kind), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (alpha_ <= 0) throw std::invalid_argument("sequential dimensions need alpha > 0");
  }

  const FunctionClass& cls() const { return cls_; }

  int dim(const std::vector<int>& rows) {
    auto it = memo_.find(rows);
    if (it != memo_.end()) return it->second.dim;
    SeqMemoEntry entry;
    for (int x = 0; x < cls_.n_points(); ++x) {
      for (const WitnessPair& pair : node_candidates(rows, x)) {
        std::vector<int> lo_rows, hi_rows;
        split(rows, x, pair, &lo_rows, &hi_rows);
        if (lo_rows.empty() || hi_rows.empty()) continue;
        if (kind_ == SeqKind::GappedReal && overlaps(lo_rows, hi_rows))
          throw std::domain_error(
              "sequential gapped dimension is unbounded: one function realizes both witness "
              "values (needs alpha > 2 beta under absolute difference)");
        const int value = 1 + std::min(dim(lo_rows), dim(hi_rows));
        if (value > entry.dim) {
          entry.dim = value;
          entry.choice = SeqChoice{x, pair, std::move(lo_rows), std::move(hi_rows)};
        }
      }
    }
    auto [pos, inserted] = memo_.emplace(rows, std::move(entry));
    (void)inserted;
    return pos->second.dim;
  }

  // Depth-k shattered tree rooted at this subclass; valid for any k <= dim.
  TreeShatterCertificate build(const std::vector<int>& rows, int k) {
    if (k == 0) {
      TreeShatterCertificate cert;
      cert.realizers = {rows.front()};
      return cert;
    }
    dim(rows);  // ensure the memo holds the argmax choice
    const SeqChoice& choice = *memo_.at(rows).choice;
    TreeShatterCertificate left = build(choice.lo_rows, k - 1);
    TreeShatterCertificate right = build(choice.hi_rows, k - 1);
    TreeShatterCertificate cert;
    cert.x_tree = LabeledTree<int>::join(choice.x, left.x_tree, right.x_tree);
    cert.witness_tree =
        LabeledTree<WitnessPair>::join(choice.pair, left.witness_tree, right.witness_tree);
    cert.realizers = std::move(left.realizers);
    cert.realizers.insert(cert.realizers.end(), right.realizers.begin(), right.realizers.end());
    return cert;
  }

  void split(const std::vector<int>& rows, int x, const WitnessPair& pair,
             std::vector<int>* lo_rows, std::vector<int>* hi_rows) const {
    for (int f : rows) {
      const Rational v = cls_.value(f, x);
      switch (kind_) {
        case SeqKind::GappedInteger:
          if (v == pair.lo) lo_rows->push_back(f);
          if (v == pair.hi) hi_rows->push_back(f);
          break;
        case SeqKind::GappedReal:
          if (metric_.dist(cls_.grid(), v, pair.lo) <= beta_) lo_rows->push_back(f);
          if (metric_.dist(cls_.grid(), v, pair.hi) <= beta_) hi_rows->push_back(f);
          break;
        case SeqKind::Sfat:
          if (pair.lo - v >= alpha_ / 2) lo_rows->push_back(f);
          if (v - pair.hi >= alpha_ / 2) hi_rows->push_back(f);
          break;
      }
    }
  }

  std::vector<WitnessPair> node_candidates(const std::vector<int>& rows, int x) const {
    std::set<Rational> attained;
    for (int f : rows) attained.insert(cls_.value(f, x));
    std::vector<WitnessPair> pairs;
    if (kind_ == SeqKind::Sfat) {
      std::set<Rational> scalars;
      for (const Rational& v : attained) {
        scalars.insert(clamp_to_range(v - alpha_ / 2, cls_.grid()));
        scalars.insert(clamp_to_range(v + alpha_ / 2, cls_.grid()));
      }
      for (const Rational& s : scalars) pairs.push_back({s, s});
      return pairs;
    }
    std::set<Rational> witness_values = attained;
    if (kind_ == SeqKind::GappedReal && metric_.kind() == Metric::Kind::AbsoluteDifference)
      for (const Rational& v : attained) {
        witness_values.insert(clamp_to_range(v - beta_, cls_.grid()));
        witness_values.insert(clamp_to_range(v + beta_, cls_.grid()));
      }
    for (auto lo = witness_values.begin(); lo != witness_values.end(); ++lo)
      for (auto hi = std::next(lo); hi != witness_values.end(); ++hi)
        if (metric_.dist(cls_.grid(), *hi, *lo) >= alpha_) pairs.push_back({*lo, *hi});
    return pairs;
  }

 private:
  static bool overlaps(const std::vector<int>& a, const std::vector<int>& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
      if (*ia == *ib) return true;
      if (*ia < *ib) ++ia;
      else ++ib;
    }
    return false;
  }

  const FunctionClass& cls_;
  const Metric& metric_;
  SeqKind kind_;
  Rational alpha_;
  Rational beta_;
  std::map<std::vector<int>, SeqMemoEntry> memo_;
};

inline std::vector<int> all_rows(const FunctionClass& cls) {
  std::vector<int> rows(static_cast<size_t>(cls.n_functions()));
  for (int f = 0; f < cls.n_functions(); ++f) rows[static_cast<size_t>(f)] = f;
  return rows;
}

inline SeqDimResult seq_dim(const FunctionClass& cls, const Metric& metric, SeqKind kind,
                            const Rational& alpha, const Rational& beta) {
  SeqDimContext ctx(cls, metric, kind, alpha, beta);
  SeqDimResult result;
  result.dim = ctx.dim(all_rows(cls));
  if (result.dim > 20) throw std::domain_error("dimension above the 2^20 certificate cap");
  result.certificate = ctx.build(all_rows(cls), result.dim);
  return result;
}

}  // namespace detail

inline SeqDimResult seq_gapped_dim_integer(const FunctionClass& cls, const Metric& metric,
                                           const Rational& alpha) {
  if (!cls.grid().is_integer()) throw std::invalid_argument("needs an integer-alphabet class");
  return detail::seq_dim(cls, metric, SeqKind::GappedInteger, alpha, 0);
}

inline SeqDimResult seq_gapped_dim_real(const FunctionClass& cls, const Metric& metric,
                                        const Rational& alpha, const Rational& beta) {
  if (cls.grid().is_integer()) throw std::invalid_argument("needs a real-grid class");
  if (beta <= 0) throw std::invalid_argument("beta must be > 0");
  return detail::seq_dim(cls, metric, SeqKind::GappedReal, alpha, beta);
}

inline SeqDimResult sfat_dim(const FunctionClass& cls, const Rational& alpha) {
  if (cls.grid().is_integer()) throw std::invalid_argument("needs a real-grid class");
  return detail::seq_dim(cls, Metric::absolute_difference(), SeqKind::Sfat, alpha, 0);
}

// Checks a proposed (x tree, witness tree) pair along all 2^d paths.
inline ShatterCheck is_tree_shattered(ShatterKind kind, const FunctionClass& cls,
                                      const Metric& metric, const LabeledTree<int>& x_tree,
                                      const LabeledTree<WitnessPair>& witness_tree,
                                      const Rational& alpha, const Rational& beta = 0) {
  if (x_tree.depth() != witness_tree.depth()) throw std::invalid_argument("tree depth mismatch");
  const int d = x_tree.depth();
  if (d > 20) throw std::invalid_argument("depth above the 2^20 path cap");
  ShatterCheck check;
  if (kind != ShatterKind::Fat && kind != ShatterKind::FixedScale)
    for (size_t node = 1; node <= LabeledTree<WitnessPair>::node_count(d); ++node) {
      const WitnessPair& s = witness_tree.at_node(node);
      if (metric.dist(cls.grid(), s.hi, s.lo) < alpha) return check;
    }
  std::vector<int> realizers;
  for (const Path& eps : sign_patterns(d)) {
    int found = -1;
    for (int f = 0; f < cls.n_functions() && found < 0; ++f) {
      bool ok = true;
      for (int t = 1; t <= d && ok; ++t) {
        const int x = x_tree.at(eps, t);
        const WitnessPair& s = witness_tree.at(eps, t);
        const Rational v = cls.value(f, x);
        ok = detail::allowed_signs(kind, metric, cls.grid(), v, s, alpha, beta) &
             (eps[static_cast<size_t>(t - 1)] > 0 ? detail::kAllowPos : detail::kAllowNeg);
      }
      if (ok) found = f;
    }
    if (found < 0) return check;
    realizers.push_back(found);
  }
  check.shattered = true;
  check.realizers = std::move(realizers);
  return check;
}

// Every function covered along every path by some tree in the set.
inline bool is_seq_cover(const FunctionClass& cls, const Metric& metric,
                         const LabeledTree<int>& x_tree, const Rational& alpha,
                         const SeqCoverSet& cover) {
  const int n = x_tree.depth();
  for (const auto& v : cover.trees)
    if (v.depth() != n) return false;
  for (int f = 0; f < cls.n_functions(); ++f)
    for (const Path& eps : sign_patterns(n)) {
      bool covered = false;
      for (const auto& v : cover.trees) {
        bool ok = true;
        for (int t = 1; t <= n && ok; ++t)
          ok = metric.dist_nums(cls.grid(), cls.value_num(f, x_tree.at(eps, t)),
                                v.at(eps, t)) <= alpha;
        if (ok) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
  return true;
}

namespace detail {

inline LabeledTree<int64_t> follow_function_tree(const FunctionClass& cls,
                                                 const LabeledTree<int>& x_tree, int f) {
  std::vector<int64_t> labels(LabeledTree<int64_t>::node_count(x_tree.depth()));
  for (size_t node = 1; node <= labels.size(); ++node)
    labels[node - 1] = cls.value_num(f, x_tree.at_node(node));
  return LabeledTree<int64_t>(x_tree.depth(), std::move(labels));
}

// Zip-join of two child cover lists under a shared root label; the shorter
// list is padded by repeating its last element so every child element is
// used and |result| = max(|left|, |right|).
inline std::vector<LabeledTree<int64_t>> join_covers(int64_t root,
                                                     const std::vector<LabeledTree<int64_t>>& left,
                                                     const std::vector<LabeledTree<int64_t>>& right) {
  std::vector<LabeledTree<int64_t>> out;
  const size_t m = std::max(left.size(), right.size());
  for (size_t i = 0; i < m; ++i) {
    const auto& l = left[std::min(i, left.size() - 1)];
    const auto& r = right[std::min(i, right.size() - 1)];
    out.push_back(LabeledTree<int64_t>::join(root, l, r));
  }
  return out;
}

inline void out_insert(std::vector<LabeledTree<int64_t>>& out,
                       std::vector<LabeledTree<int64_t>> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

inline std::vector<LabeledTree<int64_t>> seq_cover_recurse(SeqDimContext& ctx,
                                                           const std::vector<int>& rows,
                                                           const LabeledTree<int>& x_tree) {
  const FunctionClass& cls = ctx.cls();
  const int n = x_tree.depth();
  if (n == 0) return {LabeledTree<int64_t>()};
  const int d = ctx.dim(rows);

  if (d == 0) return {follow_function_tree(cls, x_tree, rows.front())};

  if (n <= d) {
    // exhaustive cover by all constant-level value tuples
    std::vector<LabeledTree<int64_t>> out;
    std::vector<int64_t> tuple(static_cast<size_t>(n), 0);
    const int64_t a = cls.grid().alphabet_size();
    for (;;) {
      std::vector<int64_t> levels;
      for (int64_t idx : tuple) levels.push_back(cls.grid().numerator_at(idx));
      out.push_back(LabeledTree<int64_t>::constant_levels(levels));
      int i = n - 1;
      while (i >= 0 && tuple[static_cast<size_t>(i)] == a - 1) tuple[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
      ++tuple[static_cast<size_t>(i)];
    }
    return out;
  }

  const int x_root = x_tree.at_node(1);
  const LabeledTree<int> left_x = x_tree.child(-1);
  const LabeledTree<int> right_x = x_tree.child(+1);

  std::map<int64_t, std::vector<int>> by_value;
  for (int f : rows) by_value[cls.value_num(f, x_root)].push_back(f);

  std::vector<int> merged;  // the near-tied blocks with dim(G_k) == d, as one subclass
  std::vector<LabeledTree<int64_t>> out;
  for (const auto& [value, sub] : by_value) {
    if (ctx.dim(sub) == d) {
      merged.insert(merged.end(), sub.begin(), sub.end());
      continue;
    }
    out_insert(out, join_covers(value, seq_cover_recurse(ctx, sub, left_x),
                                seq_cover_recurse(ctx, sub, right_x)));
  }
  if (!merged.empty()) {
    std::sort(merged.begin(), merged.end());
    const int64_t root_value = cls.value_num(merged.front(), x_root);
    out_insert(out, join_covers(root_value, seq_cover_recurse(ctx, merged, left_x),
                                seq_cover_recurse(ctx, merged, right_x)));
  }
  return out;
}

}  // namespace detail

// The inductive cover of the sequential Sauer-Shelah bound: split on the
// root value, recurse into the subtrees, zip-join the child covers, and
// treat the set of root values whose subclass keeps the full dimension as a
// single merged block. Size is at most g_M(n, seq dim).
inline SeqCoverSet seq_cover_construct(const FunctionClass& cls, const Metric& metric,
                                       const LabeledTree<int>& x_tree, const Rational& alpha) {
  if (!cls.grid().is_integer()) throw std::invalid_argument("needs an integer-alphabet class");
  detail::SeqDimContext ctx(cls, metric, SeqKind::GappedInteger, alpha, 0);
  SeqCoverSet cover;
  cover.trees = detail::seq_cover_recurse(ctx, detail::all_rows(cls), x_tree);
  return cover;
}

inline constexpr int kSeqBruteDepthCap = 3;
inline constexpr int kSeqBruteClassCap = 8;
inline constexpr int kSeqBruteAlphabetCap = 4;

// Exact minimum sequential cover size by exhausting all value-labeled trees
// and solving the set-cover instance over (function, path) pairs. Oracle
// regime only.
inline BigInt seq_cover_min_bruteforce(const FunctionClass& cls, const Metric& metric,
                                       const LabeledTree<int>& x_tree, const Rational& alpha) {
  const int n = x_tree.depth();
  if (n > kSeqBruteDepthCap || cls.n_functions() > kSeqBruteClassCap ||
      cls.grid().alphabet_size() > kSeqBruteAlphabetCap)
    throw std::invalid_argument("instance above the brute-force caps");
  if (n == 0) return 1;

  const size_t n_nodes = LabeledTree<int64_t>::node_count(n);
  const int64_t a = cls.grid().alphabet_size();
  const auto paths = sign_patterns(n);
  const size_t n_items = static_cast<size_t>(cls.n_functions()) * paths.size();

  // coverage mask over (f, path) items for every candidate tree
  std::vector<uint64_t> masks;
  std::vector<int64_t> labels(n_nodes, 0);
  for (;;) {
    LabeledTree<int64_t> tree(
        n, [&] {
          std::vector<int64_t> ls(n_nodes);
          for (size_t i = 0; i < n_nodes; ++i) ls[i] = cls.grid().numerator_at(labels[i]);
          return ls;
        }());
    uint64_t mask = 0;
    size_t item = 0;
    for (int f = 0; f < cls.n_functions(); ++f)
      for (const Path& eps : paths) {
        bool ok = true;
        for (int t = 1; t <= n && ok; ++t)
          ok = metric.dist_nums(cls.grid(), cls.value_num(f, x_tree.at(eps, t)),
                                tree.at(eps, t)) <= alpha;
        if (ok) mask |= (uint64_t{1} << item);
        ++item;
      }
    if (mask != 0) masks.push_back(mask);
    size_t i = n_nodes;
    while (i > 0 && labels[i - 1] == a - 1) labels[--i] = 0;
    if (i == 0) break;
    ++labels[i - 1];
  }

  // drop dominated masks
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<uint64_t> maximal;
  for (uint64_t m : masks) {
    bool dominated = false;
    for (uint64_t o : masks)
      if (o != m && (m & o) == m) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(m);
  }

  const uint64_t full = n_items == 64 ? ~uint64_t{0} : (uint64_t{1} << n_items) - 1;
  size_t best = maximal.size() + 1;
  // greedy incumbent
  {
    uint64_t covered = 0;
    size_t used = 0;
    while (covered != full) {
      uint64_t pick = 0;
      int gain = -1;
      for (uint64_t m : maximal) {
        const int g = __builtin_popcountll(m & ~covered);
        if (g > gain) {
          gain = g;
          pick = m;
        }
      }
      if (gain <= 0) throw std::logic_error("uncoverable item");
      covered |= pick;
      ++used;
    }
    best = used;
  }
  auto dfs = [&](auto&& self, uint64_t covered, size_t used) -> void {
    if (covered == full) {
      best = std::min(best, used);
      return;
    }
    if (used + 1 >= best) return;
    const size_t item = static_cast<size_t>(__builtin_ctzll(~covered & full));
    for (uint64_t m : maximal)
      if ((m >> item) & 1) self(self, covered | m, used + 1);
  };
  dfs(dfs, 0, 0);
  return best;
}

}  // namespace dimlab
