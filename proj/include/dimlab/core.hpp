#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimlab/rational.hpp"

namespace dimlab {

// All class values are integer numerators over a fixed denominator Q.
// Integer alphabets store the values 1..M directly (Q = 1); real grids
// store k with value k/Q, -Q <= k <= Q.
struct ValueGrid {
  enum class Kind { Integer, RealGrid };

  Kind kind = Kind::RealGrid;
  int64_t q = 1;  // denominator
  int64_t m = 0;  // alphabet size for integer grids

  static ValueGrid integer_alphabet(int64_t m) {
    if (m < 2) throw std::invalid_argument("integer alphabet needs M >= 2");
    ValueGrid g;
    g.kind = Kind::Integer;
    g.q = 1;
    g.m = m;
    return g;
  }

  static ValueGrid real_grid(int64_t q) {
    if (q < 1) throw std::invalid_argument("real grid needs Q >= 1");
    ValueGrid g;
    g.kind = Kind::RealGrid;
    g.q = q;
    g.m = 2 * q + 1;
    return g;
  }

  bool is_integer() const { return kind == Kind::Integer; }

  bool contains(int64_t numerator) const {
    if (is_integer()) return numerator >= 1 && numerator <= m;
    return numerator >= -q && numerator <= q;
  }

  // Alphabet index of a numerator, for table lookups.
  int64_t index_of(int64_t numerator) const {
    if (!contains(numerator)) throw std::out_of_range("value not on grid");
    return is_integer() ? numerator - 1 : numerator + q;
  }

  int64_t numerator_at(int64_t index) const { return is_integer() ? index + 1 : index - q; }

  int64_t alphabet_size() const { return is_integer() ? m : 2 * q + 1; }

  Rational value(int64_t numerator) const {
    if (!contains(numerator)) throw std::out_of_range("value not on grid");
    return Rational(numerator, q);
  }

  Rational min_value() const { return is_integer() ? Rational(1) : Rational(-1); }
  Rational max_value() const { return is_integer() ? Rational(m) : Rational(1); }

  bool operator==(const ValueGrid&) const = default;
};

// Distance on the value alphabet. Absolute difference works on any rational
// pair; tabulated metrics are defined on grid points only and are checked for
// symmetry, zero diagonal and the triangle inequality at construction.
class Metric {
 public:
  enum class Kind { AbsoluteDifference, Tabulated };

  Metric() = default;

  static Metric absolute_difference() { return Metric(); }

  static Metric tabulated(const ValueGrid& grid, std::vector<std::vector<Rational>> table) {
    Metric m;
    m.kind_ = Kind::Tabulated;
    m.table_ = std::move(table);
    const auto n = static_cast<size_t>(grid.alphabet_size());
    if (m.table_.size() != n) throw std::invalid_argument("metric table size mismatch");
    for (size_t i = 0; i < n; ++i) {
      if (m.table_[i].size() != n) throw std::invalid_argument("metric table not square");
      if (m.table_[i][i] != 0) throw std::invalid_argument("metric diagonal must be zero");
      for (size_t j = 0; j < n; ++j) {
        if (m.table_[i][j] < 0) throw std::invalid_argument("metric must be nonnegative");
        if (m.table_[i][j] != m.table_[j][i]) throw std::invalid_argument("metric must be symmetric");
      }
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
          if (m.table_[i][j] > m.table_[i][k] + m.table_[k][j])
            throw std::invalid_argument("metric violates triangle inequality");
    return m;
  }

  Kind kind() const { return kind_; }

  Rational dist(const ValueGrid& grid, const Rational& a, const Rational& b) const {
    if (kind_ == Kind::AbsoluteDifference) return abs_rat(a - b);
    return table_[grid_index(grid, a)][grid_index(grid, b)];
  }

  Rational dist_nums(const ValueGrid& grid, int64_t a, int64_t b) const {
    if (kind_ == Kind::AbsoluteDifference) return Rational(a < b ? b - a : a - b, grid.q);
    return table_[grid.index_of(a)][grid.index_of(b)];
  }

 private:
  static size_t grid_index(const ValueGrid& grid, const Rational& v) {
    Rational scaled = v * grid.q;
    if (den(scaled) != 1) throw std::invalid_argument("tabulated metric queried off grid");
    return static_cast<size_t>(grid.index_of(to_int64(num(scaled))));
  }

  Kind kind_ = Kind::AbsoluteDifference;
  std::vector<std::vector<Rational>> table_;
};

// The s_t = (s_t[-1], s_t[+1]) witness objects. Scalar witnesses (fat and
// fixed-scale shattering) are stored with lo == hi.
struct WitnessPair {
  Rational lo;  // s[-1]
  Rational hi;  // s[+1]

  Rational at(int sign) const { return sign < 0 ? lo : hi; }
  bool operator==(const WitnessPair&) const = default;
  auto operator<=>(const WitnessPair&) const = default;
};

struct SampleDesign {
  std::vector<int> indices;  // into FunctionClass domain points, repeats allowed

  size_t size() const { return indices.size(); }
  bool operator==(const SampleDesign&) const = default;
};

struct Path {
  std::vector<int> signs;  // entries in {-1, +1}

  size_t size() const { return signs.size(); }
  int operator[](size_t i) const { return signs[i]; }
  bool operator==(const Path&) const = default;
};

// A finite class F stored as a |F| x n_X matrix of grid numerators. Rows are
// deduplicated at construction (first occurrence kept) so the class behaves
// as a set of functions.
class FunctionClass {
 public:
  FunctionClass(std::vector<std::string> domain_labels, ValueGrid grid,
                std::vector<std::vector<int64_t>> values)
      : domain_labels_(std::move(domain_labels)), grid_(grid) {
    if (domain_labels_.empty()) throw std::invalid_argument("class needs at least one point");
    std::set<std::vector<int64_t>> seen;
    for (auto& row : values) {
      if (row.size() != domain_labels_.size())
        throw std::invalid_argument("row width does not match domain size");
      for (int64_t v : row)
        if (!grid_.contains(v)) throw std::invalid_argument("value off grid: " + std::to_string(v));
      if (seen.insert(row).second) rows_.push_back(std::move(row));
    }
    if (rows_.empty()) throw std::invalid_argument("class needs at least one function");
  }

  const ValueGrid& grid() const { return grid_; }
  const std::vector<std::string>& domain_labels() const { return domain_labels_; }
  int n_points() const { return static_cast<int>(domain_labels_.size()); }
  int n_functions() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<int64_t>>& rows() const { return rows_; }

  int64_t value_num(int f, int x) const {
    check_f(f);
    check_x(x);
    return rows_[static_cast<size_t>(f)][static_cast<size_t>(x)];
  }

  Rational value(int f, int x) const { return grid_.value(value_num(f, x)); }

  // Distinct numerators attained at point x, ascending.
  std::vector<int64_t> attained_at(int x) const {
    check_x(x);
    std::set<int64_t> vals;
    for (const auto& row : rows_) vals.insert(row[static_cast<size_t>(x)]);
    return {vals.begin(), vals.end()};
  }

  // Subclass given by row indices; used for restriction-monotonicity tests.
  FunctionClass subclass(const std::vector<int>& fs) const {
    std::vector<std::vector<int64_t>> rows;
    for (int f : fs) {
      check_f(f);
      rows.push_back(rows_[static_cast<size_t>(f)]);
    }
    return FunctionClass(domain_labels_, grid_, std::move(rows));
  }

 private:
  void check_f(int f) const {
    if (f < 0 || f >= n_functions()) throw std::out_of_range("function index out of range");
  }
  void check_x(int x) const {
    if (x < 0 || x >= n_points()) throw std::out_of_range("point index out of range");
  }

  std::vector<std::string> domain_labels_;
  ValueGrid grid_;
  std::vector<std::vector<int64_t>> rows_;
};

// f(x) lookup, the f_index/x_index entry of the class matrix.
inline Rational eval(const FunctionClass& cls, int f_index, int x_index) {
  return cls.value(f_index, x_index);
}

}  // namespace dimlab
