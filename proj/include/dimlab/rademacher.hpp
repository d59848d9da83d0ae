#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dimlab/combinatorics.hpp"
#include "dimlab/core.hpp"
#include "dimlab/nonseq_dims.hpp"
#include "dimlab/rng.hpp"
#include "dimlab/sequential.hpp"
#include "dimlab/tree.hpp"

namespace dimlab {

inline constexpr int kOffsetExactCap = 20;

// Data of the offset Rademacher process sup_f sum_t C eps_t (f(x_t) - mu_t)
// - (f(x_t) - mu_t)^2, either on a fixed design with a mu vector or on an
// X-valued tree with a mu tree.
struct OffsetInstance {
  FunctionClass cls;
  Rational c;
  std::optional<SampleDesign> design;
  std::vector<Rational> mu;
  std::optional<LabeledTree<int>> x_tree;
  std::optional<LabeledTree<Rational>> mu_tree;

  static OffsetInstance nonseq(FunctionClass cls, SampleDesign design, std::vector<Rational> mu,
                               Rational c) {
    OffsetInstance inst{std::move(cls), std::move(c), std::move(design), std::move(mu), {}, {}};
    if (inst.c <= 0) throw std::invalid_argument("C must be > 0");
    if (inst.design->size() != inst.mu.size()) throw std::invalid_argument("mu length mismatch");
    for (int x : inst.design->indices)
      if (x < 0 || x >= inst.cls.n_points()) throw std::out_of_range("design index out of range");
    for (const Rational& m : inst.mu)
      if (m < -1 || m > 1) throw std::invalid_argument("mu entries must lie in [-1, 1]");
    return inst;
  }

  static OffsetInstance seq(FunctionClass cls, LabeledTree<int> x_tree,
                            LabeledTree<Rational> mu_tree, Rational c) {
    OffsetInstance inst{std::move(cls), std::move(c), {}, {}, std::move(x_tree),
                        std::move(mu_tree)};
    if (inst.c <= 0) throw std::invalid_argument("C must be > 0");
    if (inst.x_tree->depth() != inst.mu_tree->depth())
      throw std::invalid_argument("tree depth mismatch");
    for (size_t node = 1; node <= LabeledTree<int>::node_count(inst.x_tree->depth()); ++node) {
      const int x = inst.x_tree->at_node(node);
      if (x < 0 || x >= inst.cls.n_points()) throw std::out_of_range("x label out of range");
      const Rational& m = inst.mu_tree->at_node(node);
      if (m < -1 || m > 1) throw std::invalid_argument("mu entries must lie in [-1, 1]");
    }
    return inst;
  }

  bool sequential() const { return x_tree.has_value(); }
  int rounds() const { return sequential() ? x_tree->depth() : static_cast<int>(design->size()); }
};

namespace detail {

// All per-round terms are scaled to integers over cd * D^2, where D is a
// common denominator of C and of every f(x) - mu value. This keeps the whole
// enumeration in 64-bit arithmetic.
struct OffsetScaling {
  BigInt d;   // common denominator of the centered values
  BigInt cn;  // C = cn / cd
  BigInt cd;

  explicit OffsetScaling(const OffsetInstance& inst) {
    cn = num(inst.c);
    cd = den(inst.c);
    d = inst.cls.grid().q;
    auto absorb = [&](const Rational& r) { d = boost::multiprecision::lcm(d, den(r)); };
    if (inst.sequential()) {
      for (const Rational& m : inst.mu_tree->labels()) absorb(m);
    } else {
      for (const Rational& m : inst.mu) absorb(m);
    }
    // worst per-round scaled magnitude: cn*D*2D + cd*(2D)^2
    const BigInt bound = (cn * d * 2 * d + cd * 4 * d * d) * inst.rounds();
    if (bound > (BigInt(1) << 62) / (BigInt(1) << inst.rounds()))
      throw std::overflow_error("offset instance too large for exact 64-bit enumeration");
  }

  // numerator of (value - mu) over D
  int64_t centered(const Rational& value, const Rational& mu) const {
    return to_int64(num((value - mu) * d));
  }

  int64_t linear_coeff(int64_t p) const { return to_int64(cn * d) * p; }
  int64_t square_coeff(int64_t p) const { return to_int64(cd) * p * p; }

  Rational descale(const BigInt& total, int rounds) const {
    return Rational(total) / (Rational(BigInt(1) << rounds) * cd * d * d);
  }
};

}  // namespace detail

// Exact 2^-n sum over all sign patterns of the per-pattern supremum,
// enumerated with a Gray code so each step updates one coordinate.
inline Rational offset_rad_nonseq_exact(const OffsetInstance& inst) {
  if (inst.sequential()) throw std::invalid_argument("instance is tree-shaped");
  const int n = inst.rounds();
  if (n > kOffsetExactCap) throw std::invalid_argument("round cap exceeded");
  const int n_f = inst.cls.n_functions();
  detail::OffsetScaling sc(inst);

  std::vector<std::vector<int64_t>> u(static_cast<size_t>(n_f));  // linear term per coordinate
  std::vector<int64_t> base(static_cast<size_t>(n_f), 0);         // sum at all-minus, minus squares
  for (int f = 0; f < n_f; ++f) {
    u[static_cast<size_t>(f)].resize(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
      const int64_t p = sc.centered(inst.cls.value(f, inst.design->indices[static_cast<size_t>(t)]),
                                    inst.mu[static_cast<size_t>(t)]);
      const int64_t lin = sc.linear_coeff(p);
      u[static_cast<size_t>(f)][static_cast<size_t>(t)] = lin;
      base[static_cast<size_t>(f)] -= lin + sc.square_coeff(p);
    }
  }

  std::vector<int> sign(static_cast<size_t>(n), -1);
  BigInt total = 0;
  const uint64_t patterns = uint64_t{1} << n;
  for (uint64_t i = 0;; ++i) {
    int64_t best = base[0];
    for (int f = 1; f < n_f; ++f) best = std::max(best, base[static_cast<size_t>(f)]);
    total += best;
    if (i + 1 == patterns) break;
    const int t = __builtin_ctzll(i + 1);  // Gray code flip position
    const int64_t delta = sign[static_cast<size_t>(t)] < 0 ? 2 : -2;
    sign[static_cast<size_t>(t)] = -sign[static_cast<size_t>(t)];
    for (int f = 0; f < n_f; ++f)
      base[static_cast<size_t>(f)] += delta * u[static_cast<size_t>(f)][static_cast<size_t>(t)];
  }
  return sc.descale(total, n);
}

// Sequential version: exact expectation over all 2^n paths with per-path
// supremum, by a single tree walk carrying per-function partial sums.
inline Rational offset_rad_seq_exact(const OffsetInstance& inst) {
  if (!inst.sequential()) throw std::invalid_argument("instance is design-shaped");
  const int n = inst.rounds();
  if (n > kOffsetExactCap) throw std::invalid_argument("depth cap exceeded");
  const int n_f = inst.cls.n_functions();
  detail::OffsetScaling sc(inst);

  std::vector<int64_t> acc(static_cast<size_t>(n_f), 0);
  BigInt total = 0;
  auto walk = [&](auto&& self, int level, size_t heap) -> void {
    if (level > n) {
      int64_t best = acc[0];
      for (int f = 1; f < n_f; ++f) best = std::max(best, acc[static_cast<size_t>(f)]);
      total += best;
      return;
    }
    const int x = inst.x_tree->at_node(heap);
    const Rational& mu = inst.mu_tree->at_node(heap);
    std::vector<int64_t> lin(static_cast<size_t>(n_f)), sq(static_cast<size_t>(n_f));
    for (int f = 0; f < n_f; ++f) {
      const int64_t p = sc.centered(inst.cls.value(f, x), mu);
      lin[static_cast<size_t>(f)] = sc.linear_coeff(p);
      sq[static_cast<size_t>(f)] = sc.square_coeff(p);
    }
    for (int sign : {-1, +1}) {
      for (int f = 0; f < n_f; ++f)
        acc[static_cast<size_t>(f)] += sign * lin[static_cast<size_t>(f)] - sq[static_cast<size_t>(f)];
      self(self, level + 1, 2 * heap + (sign > 0 ? 1 : 0));
      for (int f = 0; f < n_f; ++f)
        acc[static_cast<size_t>(f)] -= sign * lin[static_cast<size_t>(f)] - sq[static_cast<size_t>(f)];
    }
  };
  walk(walk, 1, 1);
  return sc.descale(total, n);
}

// Per-path supremum, the quantity whose expectation the exact routines
// enumerate. Shared by the Monte Carlo estimator and its exhaustive mode.
inline Rational offset_path_value(const OffsetInstance& inst, const Path& eps) {
  const int n = inst.rounds();
  if (static_cast<size_t>(n) != eps.size()) throw std::invalid_argument("path length mismatch");
  std::optional<Rational> best;
  for (int f = 0; f < inst.cls.n_functions(); ++f) {
    Rational sum = 0;
    for (int t = 1; t <= n; ++t) {
      Rational a;
      if (inst.sequential())
        a = inst.cls.value(f, inst.x_tree->at(eps, t)) - inst.mu_tree->at(eps, t);
      else
        a = inst.cls.value(f, inst.design->indices[static_cast<size_t>(t - 1)]) -
            inst.mu[static_cast<size_t>(t - 1)];
      sum += inst.c * eps[static_cast<size_t>(t - 1)] * a - a * a;
    }
    if (!best || sum > *best) best = sum;
  }
  return *best;
}

struct McResult {
  Rational mean;      // exact mean of the sampled (or enumerated) values
  double estimate;    // mean as a double
  double std_error;   // 0 in exhaustive mode
  uint64_t samples;
};

// Seeded Monte Carlo estimate of the exact complexity; identical seeds give
// identical output. With `exhaustive` set, enumerates all 2^n paths instead
// and reproduces the exact value bit for bit.
inline McResult offset_rad_mc(const OffsetInstance& inst, uint64_t samples, uint64_t seed,
                              bool exhaustive = false) {
  const int n = inst.rounds();
  Rational sum = 0, sum_sq = 0;
  uint64_t count;
  if (exhaustive) {
    if (n > kOffsetExactCap) throw std::invalid_argument("round cap exceeded");
    count = uint64_t{1} << n;
    for (uint64_t i = 0; i < count; ++i) {
      const Rational v = offset_path_value(inst, path_from_index(static_cast<uint32_t>(i), n));
      sum += v;
    }
    return {sum / count, to_double(sum / count), 0.0, count};
  }
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  count = samples;
  CounterRng rng(seed);
  for (uint64_t i = 0; i < samples; ++i) {
    const uint64_t idx = rng.next_below(uint64_t{1} << n);
    const Rational v = offset_path_value(inst, path_from_index(static_cast<uint32_t>(idx), n));
    sum += v;
    sum_sq += v * v;
  }
  const Rational mean = sum / count;
  double se = 0.0;
  if (samples > 1) {
    const Rational var = sum_sq / count - mean * mean;
    se = std::sqrt(std::max(0.0, to_double(var)) / static_cast<double>(samples));
  }
  return {mean, to_double(mean), se, count};
}

namespace detail {
inline int64_t block_length(const Rational& gap) {
  if (gap <= 0) throw std::invalid_argument("witness gap must be positive");
  const BigInt k = floor_big(1 / (gap * gap));
  return k < 1 ? 1 : to_int64(k);
}
}  // namespace detail

// Lower-bound design: each shattered point repeated k_t = floor(1/gap_t^2) v 1
// times against the witness midpoint, with the remaining budget spent on the
// last point against its upper witness value.
inline OffsetInstance build_block_design_nonseq(const FunctionClass& cls,
                                                const ShatterCertificate& cert, int n,
                                                const Rational& c) {
  const int d = static_cast<int>(cert.points.size());
  if (d < 1) throw std::invalid_argument("certificate must shatter at least one point");
  for (const WitnessPair& s : cert.witnesses)
    if (s.lo >= s.hi) throw std::invalid_argument("witness pairs must satisfy lo < hi");

  SampleDesign design;
  std::vector<Rational> mu;
  for (int t = 0; t + 1 < d; ++t) {
    const WitnessPair& s = cert.witnesses[static_cast<size_t>(t)];
    const int64_t k = detail::block_length(s.hi - s.lo);
    for (int64_t j = 0; j < k; ++j) {
      design.indices.push_back(cert.points.indices[static_cast<size_t>(t)]);
      mu.push_back((s.lo + s.hi) / 2);
    }
  }
  if (design.size() > static_cast<size_t>(n))
    throw std::invalid_argument("budget n too small for the block design");
  while (design.size() < static_cast<size_t>(n)) {
    design.indices.push_back(cert.points.indices[static_cast<size_t>(d - 1)]);
    mu.push_back(cert.witnesses[static_cast<size_t>(d - 1)].hi);
  }
  return OffsetInstance::nonseq(cls, std::move(design), std::move(mu), c);
}

// Adaptive lower-bound trees: along each path, sign blocks of length
// k_t(eps~) are aggregated by majority (ties to +1) into eps~_t, the next
// shattered-tree node is repeated for its block, and once all d blocks are
// done the path is padded with x_0 against mu = f^{eps~}(x_0).
inline OffsetInstance build_block_tree_seq(const FunctionClass& cls,
                                           const TreeShatterCertificate& cert, int n,
                                           const Rational& c) {
  const int d = cert.x_tree.depth();
  if (d < 1) throw std::invalid_argument("certificate must shatter at least depth 1");
  if (n > kOffsetExactCap) throw std::invalid_argument("depth cap exceeded");
  for (size_t node = 1; node <= LabeledTree<WitnessPair>::node_count(d); ++node) {
    const WitnessPair& s = cert.witness_tree.at_node(node);
    if (s.lo >= s.hi) throw std::invalid_argument("witness pairs must satisfy lo < hi");
  }
  const int x0 = 0;

  std::vector<int> x_labels(LabeledTree<int>::node_count(n));
  std::vector<Rational> mu_labels(LabeledTree<Rational>::node_count(n));

  struct Frame {
    Path eps_tilde;
    int block = 1;     // 1-based; d+1 means the padded tail
    int pos = 0;       // rounds already placed in the current block
    int sum = 0;       // sign sum within the current block
    int64_t k = 0;     // current block length
  };
  auto block_k = [&](const Path& prefix, int block) {
    const WitnessPair& s = cert.witness_tree.at(prefix, block);
    return detail::block_length(s.hi - s.lo);
  };
  auto fill = [&](auto&& self, int level, size_t heap, Frame frame) -> void {
    if (level > n) {
      if (frame.block <= d)
        throw std::invalid_argument("budget n too small for the block tree on some path");
      return;
    }
    if (frame.block <= d && frame.pos == 0) frame.k = block_k(frame.eps_tilde, frame.block);
    if (frame.block <= d) {
      const WitnessPair& s = cert.witness_tree.at(frame.eps_tilde, frame.block);
      x_labels[heap - 1] = cert.x_tree.at(frame.eps_tilde, frame.block);
      mu_labels[heap - 1] = (s.lo + s.hi) / 2;
    } else {
      const int f = cert.realizers[pattern_index(frame.eps_tilde)];
      x_labels[heap - 1] = x0;
      mu_labels[heap - 1] = cls.value(f, x0);
    }
    for (int sign : {-1, +1}) {
      Frame next = frame;
      if (next.block <= d) {
        next.sum += sign;
        if (++next.pos == next.k) {
          next.eps_tilde.signs.push_back(next.sum >= 0 ? 1 : -1);
          ++next.block;
          next.pos = 0;
          next.sum = 0;
        }
      }
      self(self, level + 1, 2 * heap + (sign > 0 ? 1 : 0), std::move(next));
    }
  };
  fill(fill, 1, 1, Frame{});

  return OffsetInstance::seq(cls, LabeledTree<int>(n, std::move(x_labels)),
                             LabeledTree<Rational>(n, std::move(mu_labels)), c);
}

}  // namespace dimlab
