#pragma once

#include <string>
#include <vector>

#include "dimlab/core.hpp"
#include "dimlab/rational.hpp"

namespace testutil {

using dimlab::FunctionClass;
using dimlab::Rational;
using dimlab::ValueGrid;

inline Rational rat(const std::string& s) { return dimlab::parse_rational(s); }

inline FunctionClass integer_class(int64_t m, std::vector<std::vector<int64_t>> rows) {
  std::vector<std::string> labels;
  for (size_t i = 0; i < rows.front().size(); ++i) labels.push_back("x" + std::to_string(i + 1));
  return FunctionClass(std::move(labels), ValueGrid::integer_alphabet(m), std::move(rows));
}

inline FunctionClass real_class(int64_t q, std::vector<std::vector<int64_t>> rows) {
  std::vector<std::string> labels;
  for (size_t i = 0; i < rows.front().size(); ++i) labels.push_back("x" + std::to_string(i + 1));
  return FunctionClass(std::move(labels), ValueGrid::real_grid(q), std::move(rows));
}

// All constant functions over the grid, one point per extra label.
inline FunctionClass constant_class(int64_t q, std::vector<int64_t> constants, int n_points = 1) {
  std::vector<std::vector<int64_t>> rows;
  for (int64_t c : constants) rows.push_back(std::vector<int64_t>(static_cast<size_t>(n_points), c));
  return real_class(q, std::move(rows));
}

}  // namespace testutil
