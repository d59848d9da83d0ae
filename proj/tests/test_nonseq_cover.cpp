#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dimlab/constructions.hpp"
#include "dimlab/nonseq_cover.hpp"
#include "dimlab/nonseq_dims.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dimlab;
using testutil::rat;

namespace {

const Metric kAbs = Metric::absolute_difference();

SampleDesign all_points(const FunctionClass& cls) {
  SampleDesign d;
  for (int x = 0; x < cls.n_points(); ++x) d.indices.push_back(x);
  return d;
}

// same class embedded into the half-refined grid (numerators doubled)
FunctionClass refine_grid(const FunctionClass& cls) {
  std::vector<std::vector<int64_t>> rows;
  for (const auto& row : cls.rows()) {
    std::vector<int64_t> doubled;
    for (int64_t v : row) doubled.push_back(2 * v);
    rows.push_back(std::move(doubled));
  }
  return FunctionClass(cls.domain_labels(), ValueGrid::real_grid(2 * cls.grid().q),
                       std::move(rows));
}

}  // namespace

TEST_CASE("cover minimum on canonical classes") {
  // everything within alpha of one vector
  const auto close = testutil::real_class(4, {{0, 1}, {1, 0}, {0, 0}});
  const auto one = cover_min_exact(close, all_points(close), kAbs, rat("1/4"));
  CHECK(one.size == 1);
  CHECK(is_cover(close, all_points(close), kAbs, rat("1/4"), one.cover));

  // two far constants need two centers at alpha = 1/2
  const auto pm = testutil::constant_class(2, {-2, 2});
  CHECK(cover_min_exact(pm, all_points(pm), kAbs, rat("1/2")).size == 2);

  const auto big = random_class(60, 2, ValueGrid::real_grid(4), 1);
  REQUIRE(big.n_functions() > kCoverExactCap);
  CHECK_THROWS_AS(cover_min_exact(big, SampleDesign{{0}}, kAbs, 1), std::invalid_argument);
}

TEST_CASE("cover minimum equals the exhaustive set-cover oracle") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const bool integer = seed % 2 == 0;
    const auto grid = integer ? ValueGrid::integer_alphabet(3) : ValueGrid::real_grid(2);
    const auto cls = random_class(3 + static_cast<int>(seed % 6), 2 + static_cast<int>(seed % 3),
                                  grid, 880 + seed);
    const auto design = all_points(cls);
    for (const Rational& alpha : {rat("1/2"), rat("1")}) {
      const auto got = cover_min_exact(cls, design, kAbs, alpha);
      INFO("seed " << seed << " alpha " << alpha);
      CHECK(got.size == oracle::cover_min_oracle(cls, design, kAbs, alpha));
      CHECK(is_cover(cls, design, kAbs, alpha, got.cover));
    }
  }
}

TEST_CASE("greedy cover is valid and at least the minimum") {
  const auto single = testutil::real_class(2, {{1, -1}});
  CHECK(cover_greedy(single, all_points(single), kAbs, rat("1/2")).size == 1);

  for (uint64_t seed = 0; seed < 12; ++seed) {
    const auto cls = random_class(8, 3, ValueGrid::real_grid(2), 9100 + seed);
    const auto design = all_points(cls);
    const auto greedy = cover_greedy(cls, design, kAbs, rat("1/2"));
    const auto exact = cover_min_exact(cls, design, kAbs, rat("1/2"));
    CHECK(greedy.size >= exact.size);
    CHECK(is_cover(cls, design, kAbs, rat("1/2"), greedy.cover));
  }
}

TEST_CASE("packing on canonical classes") {
  const auto consts = testutil::constant_class(1, {-1, 0, 1});
  CHECK(packing_max_exact(consts, all_points(consts), kAbs, 1).size == 3);

  const auto single = testutil::constant_class(1, {1});
  CHECK(packing_max_exact(single, all_points(single), kAbs, 1).size == 1);
}

TEST_CASE("packing equals the max-clique oracle and dominates covering") {
  for (uint64_t seed = 0; seed < 16; ++seed) {
    const auto cls = random_class(3 + static_cast<int>(seed % 8), 2 + static_cast<int>(seed % 3),
                                  ValueGrid::real_grid(2), 17300 + seed);
    const auto design = all_points(cls);
    for (const Rational& alpha : {rat("1/2"), rat("1")}) {
      const auto pack = packing_max_exact(cls, design, kAbs, alpha);
      INFO("seed " << seed << " alpha " << alpha);
      CHECK(pack.size == oracle::packing_max_oracle(cls, design, kAbs, alpha));
      // the returned subset is pairwise separated
      for (size_t i = 0; i < pack.subset.size(); ++i)
        for (size_t j = i + 1; j < pack.subset.size(); ++j) {
          Rational d = 0;
          for (size_t t = 0; t < design.size(); ++t)
            d = std::max(d, kAbs.dist_nums(
                                cls.grid(),
                                cls.value_num(pack.subset[i], design.indices[t]),
                                cls.value_num(pack.subset[j], design.indices[t])));
          CHECK(d >= alpha);
        }
      // covering-packing inequality
      CHECK(cover_min_exact(cls, design, kAbs, alpha).size <= pack.size);
    }
  }
}

TEST_CASE("tabulated metrics drive covers through the center masks") {
  // uniform distance 2: a center covers its exact value only at alpha = 1
  const auto grid = ValueGrid::integer_alphabet(2);
  std::vector<std::vector<Rational>> uniform = {{0, 2}, {2, 0}};
  const auto metric = Metric::tabulated(grid, uniform);
  const auto cls = testutil::integer_class(2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
  const auto design = all_points(cls);

  CHECK(cover_min_exact(cls, design, kAbs, 1).size == 1);
  const auto r = cover_min_exact(cls, design, metric, 1);
  CHECK(r.size == 4);
  CHECK(is_cover(cls, design, metric, 1, r.cover));
  CHECK(packing_max_exact(cls, design, metric, 1).size == 4);
}

TEST_CASE("cover and packing are monotone in alpha") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const auto cls = random_class(7, 3, ValueGrid::real_grid(2), 520 + seed);
    const auto design = all_points(cls);
    CHECK(cover_min_exact(cls, design, kAbs, rat("1")).size <=
          cover_min_exact(cls, design, kAbs, rat("1/2")).size);
    CHECK(packing_max_exact(cls, design, kAbs, rat("1")).size <=
          packing_max_exact(cls, design, kAbs, rat("1/2")).size);
  }
}

TEST_CASE("grid-restricted centers match the half-grid-refined oracle") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto cls = random_class(6, 3, ValueGrid::real_grid(2), 6400 + seed);
    const auto refined = refine_grid(cls);
    const auto design = all_points(cls);
    for (const Rational& alpha : {rat("1/2"), rat("1")})
      CHECK(cover_min_exact(cls, design, kAbs, alpha).size ==
            cover_min_exact(refined, design, kAbs, alpha).size);
  }
}

TEST_CASE("integer cover is bounded via the gapped dimension") {
  // log N <= 16 d log^2(enM), float-guarded
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int m = 2 + static_cast<int>(seed % 3);
    const auto cls = random_class(8, 3, ValueGrid::integer_alphabet(m), 4100 + seed);
    const auto design = all_points(cls);
    for (const Rational& alpha : {rat("1"), rat("2")}) {
      const auto n_cover = cover_min_exact(cls, design, kAbs, alpha);
      const int d = gapped_dim_integer(cls, kAbs, alpha).dim;
      const double lhs = std::log(n_cover.size.convert_to<double>());
      const double log_enm =
          std::log(std::exp(1.0) * static_cast<double>(design.size()) * static_cast<double>(m));
      CHECK(lhs <= 16.0 * d * log_enm * log_enm + 1e-9);
    }
  }
}

TEST_CASE("real cover at alpha + beta is bounded via the real gapped dimension") {
  // log N(alpha+beta) <= 16 d(alpha,beta) log^2(2en/beta), float-guarded
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto cls = random_class(8, 3, ValueGrid::real_grid(4), 15000 + seed);
    const auto design = all_points(cls);
    const Rational alpha = rat("1/2"), beta = rat("1/4");
    const auto n_cover = cover_min_exact(cls, design, kAbs, alpha + beta);
    const int d = gapped_dim_real(cls, kAbs, alpha, beta).dim;
    const double lhs = std::log(n_cover.size.convert_to<double>());
    const double lg =
        std::log(2.0 * std::exp(1.0) * static_cast<double>(design.size()) / to_double(beta));
    CHECK(lhs <= 16.0 * d * lg * lg + 1e-9);
  }
}
