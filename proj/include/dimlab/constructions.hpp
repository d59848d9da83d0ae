#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimlab/combinatorics.hpp"
#include "dimlab/core.hpp"
#include "dimlab/rng.hpp"

namespace dimlab {

inline constexpr int kMaxGeneratedFunctions = 4096;

namespace detail {
inline std::vector<std::string> point_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}
}  // namespace detail

// Class with d = log2(1/alpha) points and 2^d functions
// f^eps(x_i) = eps_i * (alpha + sum_j (eps_j+1)/2 * 2^(j-1) * alpha).
// Its gapped dimension collapses to 1 while the scale-sensitive dimension
// stays d, which is the separation the harness reproduces.
inline FunctionClass log_gap_class_nonseq(const Rational& alpha, int64_t q) {
  if (alpha <= 0 || alpha >= 1) throw std::invalid_argument("log-gap class needs 0 < alpha < 1");
  Rational inv = 1 / alpha;
  if (den(inv) != 1 || (num(inv) & (num(inv) - 1)) != 0)
    throw std::invalid_argument("log-gap class needs alpha = 1/2^m");
  if (Rational(q) * alpha < 1 || den(Rational(q) * alpha) != 1)
    throw std::invalid_argument("Q must be a multiple of 1/alpha");

  int d = 0;
  for (BigInt v = num(inv); v > 1; v >>= 1) ++d;

  std::vector<std::vector<int64_t>> rows;
  for (const Path& eps : sign_patterns(d)) {
    Rational a = alpha;
    for (int i = 1; i <= d; ++i)
      if (eps[static_cast<size_t>(i - 1)] > 0) a += Rational(BigInt(1) << (i - 1)) * alpha;
    std::vector<int64_t> row;
    for (int i = 0; i < d; ++i) {
      Rational value = Rational(eps[static_cast<size_t>(i)]) * a;
      row.push_back(to_int64(num(value * q)));
    }
    rows.push_back(std::move(row));
  }
  return FunctionClass(detail::point_labels(d), ValueGrid::real_grid(q), std::move(rows));
}

// One domain point carrying every grid value as its own function.
inline FunctionClass single_point_grid_class(const Rational& step) {
  if (step <= 0 || num(step) != 1) throw std::invalid_argument("step must be 1/Q");
  const int64_t q = to_int64(den(step));
  std::vector<std::vector<int64_t>> rows;
  for (int64_t k = -q; k <= q; ++k) rows.push_back({k});
  return FunctionClass({"x1"}, ValueGrid::real_grid(q), std::move(rows));
}

struct GridInterval {
  int64_t lo;  // numerators over the class Q
  int64_t hi;
};

// Every combination of per-point values from the given grid intervals.
inline FunctionClass interval_product_class(const std::vector<GridInterval>& intervals, int64_t q) {
  if (intervals.empty()) throw std::invalid_argument("need at least one interval");
  const ValueGrid grid = ValueGrid::real_grid(q);
  BigInt count = 1;
  for (const auto& iv : intervals) {
    if (iv.lo > iv.hi || !grid.contains(iv.lo) || !grid.contains(iv.hi))
      throw std::invalid_argument("bad interval");
    count *= (iv.hi - iv.lo + 1);
    if (count > kMaxGeneratedFunctions) throw std::invalid_argument("interval product too large");
  }
  std::vector<std::vector<int64_t>> rows;
  std::vector<int64_t> cur;
  for (const auto& iv : intervals) cur.push_back(iv.lo);
  for (;;) {
    rows.push_back(cur);
    size_t i = intervals.size();
    while (i > 0) {
      --i;
      if (cur[i] < intervals[i].hi) {
        ++cur[i];
        for (size_t j = i + 1; j < intervals.size(); ++j) cur[j] = intervals[j].lo;
        break;
      }
      if (i == 0) {
        return FunctionClass(detail::point_labels(static_cast<int>(intervals.size())),
                             grid, std::move(rows));
      }
    }
  }
}

// Closure under pairwise convex combinations at weights j/resolution,
// keeping only combinations that land back on the class grid, iterated to a
// fixpoint (or the size cap).
inline FunctionClass convexify(const FunctionClass& cls, int64_t resolution) {
  if (cls.grid().is_integer()) throw std::invalid_argument("convexify needs a real grid");
  if (resolution < 1 || cls.grid().q % resolution != 0)
    throw std::invalid_argument("resolution must divide Q");

  std::set<std::vector<int64_t>> pool(cls.rows().begin(), cls.rows().end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int64_t>> snapshot(pool.begin(), pool.end());
    for (size_t a = 0; a < snapshot.size() && pool.size() <= kMaxGeneratedFunctions; ++a) {
      for (size_t b = a + 1; b < snapshot.size() && pool.size() <= kMaxGeneratedFunctions; ++b) {
        for (int64_t j = 1; j < resolution; ++j) {
          std::vector<int64_t> combo(snapshot[a].size());
          bool on_grid = true;
          for (size_t x = 0; x < combo.size(); ++x) {
            const int64_t mixed = j * snapshot[a][x] + (resolution - j) * snapshot[b][x];
            if (mixed % resolution != 0) {
              on_grid = false;
              break;
            }
            combo[x] = mixed / resolution;
          }
          if (on_grid && pool.insert(combo).second) grew = true;
        }
      }
    }
    if (pool.size() > kMaxGeneratedFunctions) throw std::invalid_argument("convexify size cap hit");
  }
  return FunctionClass(cls.domain_labels(), cls.grid(),
                       std::vector<std::vector<int64_t>>(pool.begin(), pool.end()));
}

// Seeded uniform sampling over the grid; duplicate rows collapse, so the
// returned class may hold fewer than n_functions rows.
inline FunctionClass random_class(int n_functions, int n_points, const ValueGrid& grid,
                                  uint64_t seed) {
  if (n_functions < 1 || n_points < 1) throw std::invalid_argument("need positive sizes");
  CounterRng rng(seed);
  const uint64_t alphabet = static_cast<uint64_t>(grid.alphabet_size());
  std::vector<std::vector<int64_t>> rows;
  for (int f = 0; f < n_functions; ++f) {
    std::vector<int64_t> row;
    for (int x = 0; x < n_points; ++x)
      row.push_back(grid.numerator_at(static_cast<int64_t>(rng.next_below(alphabet))));
    rows.push_back(std::move(row));
  }
  return FunctionClass(detail::point_labels(n_points), grid, std::move(rows));
}

}  // namespace dimlab
