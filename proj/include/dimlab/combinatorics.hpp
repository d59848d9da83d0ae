#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dimlab/core.hpp"
#include "dimlab/rational.hpp"

namespace dimlab {

inline constexpr int kMaxPatternDepth = 25;

inline BigInt binomial(int64_t n, int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int64_t i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

// g_M(n, d) = sum_{i=0}^{d} C(n, i) (M-1)^i, the Sauer-type counting
// function bounding sequential cover sizes.
inline BigInt g_m(int64_t n, int64_t d, int64_t m) {
  if (n < 0 || d < 0) throw std::invalid_argument("g_M needs n, d >= 0");
  if (m < 2) throw std::invalid_argument("g_M needs M >= 2");
  BigInt total = 0;
  BigInt power = 1;
  for (int64_t i = 0; i <= d; ++i) {
    total += binomial(n, i) * power;
    power *= (m - 1);
  }
  return total;
}

// E |(1/k) sum_{i<=k} eps_i| over uniform signs, via binomial sums:
// (1/(k 2^k)) sum_j C(k, j) |2j - k|.
inline Rational khintchine_abs_mean(int k) {
  if (k < 1 || k > 30) throw std::invalid_argument("khintchine_abs_mean needs 1 <= k <= 30");
  BigInt total = 0;
  for (int j = 0; j <= k; ++j) total += binomial(k, j) * BigInt(j + j >= k ? 2 * j - k : k - 2 * j);
  return Rational(total, BigInt(k) << k);
}

// Index of a sign pattern with eps_1 as the most significant bit:
// sum_i (eps_i + 1)/2 * 2^(d-i).
inline uint32_t pattern_index(const Path& path) {
  uint32_t idx = 0;
  for (size_t i = 0; i < path.size(); ++i) idx = 2 * idx + (path[i] > 0 ? 1 : 0);
  return idx;
}

inline Path path_from_index(uint32_t index, int d) {
  Path p;
  p.signs.resize(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) p.signs[static_cast<size_t>(i)] = (index >> (d - 1 - i)) & 1 ? 1 : -1;
  return p;
}

// All 2^d paths in index order.
inline std::vector<Path> sign_patterns(int d) {
  if (d < 0 || d > kMaxPatternDepth) throw std::invalid_argument("sign pattern depth out of range");
  std::vector<Path> out;
  out.reserve(size_t{1} << d);
  for (uint32_t i = 0; i < (uint32_t{1} << d); ++i) out.push_back(path_from_index(i, d));
  return out;
}

// Bit-indexed set over the 2^d sign patterns of depth d.
class SignPatternSet {
 public:
  explicit SignPatternSet(int d) : d_(d) {
    if (d < 0 || d > 20) throw std::invalid_argument("sign pattern set depth out of range");
    blocks_.assign(((size_t{1} << d) + 63) / 64, 0);
  }

  int depth() const { return d_; }
  size_t universe() const { return size_t{1} << d_; }

  void set(uint32_t index) { blocks_[index >> 6] |= (uint64_t{1} << (index & 63)); }
  bool test(uint32_t index) const { return (blocks_[index >> 6] >> (index & 63)) & 1; }

  void set_all() {
    for (auto& b : blocks_) b = ~uint64_t{0};
    trim();
  }

  SignPatternSet& operator|=(const SignPatternSet& o) {
    for (size_t i = 0; i < blocks_.size(); ++i) blocks_[i] |= o.blocks_[i];
    return *this;
  }

  bool full() const {
    size_t remaining = universe();
    for (uint64_t b : blocks_) {
      const size_t take = remaining >= 64 ? 64 : remaining;
      const uint64_t want = take == 64 ? ~uint64_t{0} : (uint64_t{1} << take) - 1;
      if ((b & want) != want) return false;
      remaining -= take;
    }
    return true;
  }

  size_t count() const {
    size_t c = 0;
    for (uint64_t b : blocks_) c += static_cast<size_t>(__builtin_popcountll(b));
    return c;
  }

 private:
  void trim() {
    const size_t tail = universe() & 63;
    if (tail != 0 && !blocks_.empty()) blocks_.back() &= (uint64_t{1} << tail) - 1;
  }

  int d_;
  std::vector<uint64_t> blocks_;
};

}  // namespace dimlab
