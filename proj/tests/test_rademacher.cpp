#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dimlab/constructions.hpp"
#include "dimlab/nonseq_dims.hpp"
#include "dimlab/rademacher.hpp"
#include "dimlab/sequential.hpp"
#include "helpers.hpp"

using namespace dimlab;
using testutil::rat;

namespace {

const Metric kAbs = Metric::absolute_difference();

// product class {lo, hi}^points: realizers land exactly on the witnesses
FunctionClass two_value_product(int64_t q, int64_t lo, int64_t hi, int points) {
  std::vector<GridInterval> ivs;
  for (int i = 0; i < points; ++i) ivs.push_back({lo, hi});
  auto cls = interval_product_class(ivs, q);
  // keep only rows using exactly lo or hi
  std::vector<std::vector<int64_t>> rows;
  for (const auto& row : cls.rows()) {
    bool ok = true;
    for (int64_t v : row) ok &= (v == lo || v == hi);
    if (ok) rows.push_back(row);
  }
  return FunctionClass(cls.domain_labels(), cls.grid(), rows);
}

std::vector<Rational> constant_mu(size_t n, const Rational& v) {
  return std::vector<Rational>(n, v);
}

// hand-built certificates with witness pairs exactly on the attained values,
// validated through the shattering checkers
ShatterCertificate exact_cert_nonseq(const FunctionClass& cls, const Rational& lo,
                                     const Rational& hi, int d, const Rational& alpha,
                                     const Rational& beta) {
  ShatterCertificate cert;
  for (int t = 0; t < d; ++t) {
    cert.points.indices.push_back(t);
    cert.witnesses.push_back({lo, hi});
  }
  const auto check = is_shattered_nonseq(ShatterKind::GappedReal, cls, kAbs, cert.points,
                                         cert.witnesses, alpha, beta);
  REQUIRE(check.shattered);
  cert.realizers = check.realizers;
  return cert;
}

TreeShatterCertificate exact_cert_seq(const FunctionClass& cls, const Rational& lo,
                                      const Rational& hi, int d, const Rational& alpha,
                                      const Rational& beta) {
  TreeShatterCertificate cert;
  std::vector<int> xs;
  std::vector<WitnessPair> ws;
  for (int t = 0; t < d; ++t) {
    xs.push_back(t);
    ws.push_back({lo, hi});
  }
  cert.x_tree = LabeledTree<int>::constant_levels(xs);
  cert.witness_tree = LabeledTree<WitnessPair>::constant_levels(ws);
  const auto check = is_tree_shattered(ShatterKind::GappedReal, cls, kAbs, cert.x_tree,
                                       cert.witness_tree, alpha, beta);
  REQUIRE(check.shattered);
  cert.realizers = check.realizers;
  return cert;
}

}  // namespace

TEST_CASE("offset complexity vanishes for a centered singleton") {
  const auto cls = testutil::constant_class(2, {0}, 1);
  SampleDesign design{{0, 0, 0}};
  for (const Rational& c : {rat("1"), rat("2"), rat("7/2")}) {
    const auto inst = OffsetInstance::nonseq(cls, design, constant_mu(3, 0), c);
    CHECK(offset_rad_nonseq_exact(inst) == 0);
  }
}

TEST_CASE("two opposite constants at C = 2 give exactly 1") {
  const auto cls = testutil::constant_class(1, {-1, 1});
  const auto inst = OffsetInstance::nonseq(cls, SampleDesign{{0}}, constant_mu(1, 0), 2);
  CHECK(offset_rad_nonseq_exact(inst) == 1);
}

TEST_CASE("offset instances validate their inputs") {
  const auto cls = testutil::constant_class(1, {0});
  CHECK_THROWS_AS(OffsetInstance::nonseq(cls, SampleDesign{{0}}, constant_mu(2, 0), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(OffsetInstance::nonseq(cls, SampleDesign{{0}}, constant_mu(1, 0), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(OffsetInstance::nonseq(cls, SampleDesign{{0}}, {rat("3/2")}, 1),
                  std::invalid_argument);
}

TEST_CASE("a centered singleton has zero sequential complexity") {
  const auto cls = testutil::constant_class(2, {0}, 1);
  const auto x_tree = LabeledTree<int>::constant_levels({0, 0, 0});
  const auto mu_tree = LabeledTree<Rational>::constant_levels({0, 0, 0});
  CHECK(offset_rad_seq_exact(OffsetInstance::seq(cls, x_tree, mu_tree, 2)) == 0);
}

TEST_CASE("sequential evaluation on constant trees equals the flattened design") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const auto cls = random_class(5, 3, ValueGrid::real_grid(2), 4300 + seed);
    CounterRng rng(seed);
    const int n = 3 + static_cast<int>(rng.next_below(3));
    std::vector<int> xs;
    std::vector<Rational> mus;
    SampleDesign design;
    for (int t = 0; t < n; ++t) {
      xs.push_back(static_cast<int>(rng.next_below(3)));
      mus.push_back(Rational(static_cast<int64_t>(rng.next_below(5)) - 2, 2));
      design.indices.push_back(xs.back());
    }
    const auto seq_inst = OffsetInstance::seq(cls, LabeledTree<int>::constant_levels(xs),
                                              LabeledTree<Rational>::constant_levels(mus), 2);
    const auto nonseq_inst = OffsetInstance::nonseq(cls, design, mus, 2);
    CHECK(offset_rad_seq_exact(seq_inst) == offset_rad_nonseq_exact(nonseq_inst));
  }
}

TEST_CASE("per-path supremum is nonnegative when some function matches mu") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const auto cls = random_class(6, 2, ValueGrid::real_grid(2), 5500 + seed);
    SampleDesign design{{0, 1, 0}};
    std::vector<Rational> mu;
    for (int t = 0; t < 3; ++t) mu.push_back(cls.value(0, design.indices[static_cast<size_t>(t)]));
    const auto inst = OffsetInstance::nonseq(cls, design, mu, 2);
    for (const Path& eps : sign_patterns(3)) CHECK(offset_path_value(inst, eps) >= 0);
    CHECK(offset_rad_nonseq_exact(inst) >= 0);
  }
}

TEST_CASE("the exact value is nondecreasing in C") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const auto cls = random_class(5, 2, ValueGrid::real_grid(2), 6700 + seed);
    SampleDesign design{{0, 1, 1, 0}};
    const std::vector<Rational> mu = {rat("1/2"), 0, rat("-1/2"), 0};
    Rational prev = offset_rad_nonseq_exact(OffsetInstance::nonseq(cls, design, mu, rat("1/2")));
    for (const Rational& c : {rat("1"), rat("2"), rat("3"), rat("9/2")}) {
      const Rational cur = offset_rad_nonseq_exact(OffsetInstance::nonseq(cls, design, mu, c));
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("monte carlo estimates are seeded, calibrated and exact in exhaustive mode") {
  const auto cls = random_class(5, 2, ValueGrid::real_grid(2), 97);
  SampleDesign design{{0, 1, 0, 1, 0, 1}};
  const std::vector<Rational> mu = {0, rat("1/2"), 0, rat("-1/2"), 0, 0};
  const auto inst = OffsetInstance::nonseq(cls, design, mu, 2);
  const Rational exact = offset_rad_nonseq_exact(inst);

  // determinism: identical seeds give identical bits
  const auto a = offset_rad_mc(inst, 500, 123);
  const auto b = offset_rad_mc(inst, 500, 123);
  CHECK(a.mean == b.mean);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);

  // degenerate MC: exhaustive flag reproduces the exact value bit for bit
  const auto ex = offset_rad_mc(inst, uint64_t{1} << 6, 0, true);
  CHECK(ex.mean == exact);
  CHECK(ex.std_error == 0.0);

  // calibration: |estimate - exact| <= 5 SE for at least 99% of seeds
  int ok = 0;
  const int n_seeds = 200;
  for (int seed = 0; seed < n_seeds; ++seed) {
    const auto r = offset_rad_mc(inst, 400, static_cast<uint64_t>(seed));
    const double err = std::abs(to_double(Rational(r.mean - exact)));
    if (r.std_error == 0.0 ? err == 0.0 : err <= 5.0 * r.std_error) ++ok;
  }
  CHECK(ok >= n_seeds * 99 / 100);
}

TEST_CASE("block design layout follows the certificate gaps") {
  // gaps (1, 1, 1), n = 5: blocks of sizes 1, 1 and a tail of 3
  const auto cls = two_value_product(2, -1, 1, 3);
  const auto cert = exact_cert_nonseq(cls, rat("-1/2"), rat("1/2"), 3, 1, rat("1/20"));
  const auto inst = build_block_design_nonseq(cls, cert, 5, 2);
  REQUIRE(inst.design->size() == 5);
  CHECK(inst.design->indices[0] == 0);
  CHECK(inst.design->indices[1] == 1);
  for (size_t t = 2; t < 5; ++t) CHECK(inst.design->indices[t] == 2);
  // the two leading blocks carry the witness midpoints, the tail s_d[+1]
  CHECK(inst.mu[0] == 0);
  CHECK(inst.mu[4] == rat("1/2"));

  // gap 1/2 repeats a point four times
  const auto narrow = two_value_product(4, 0, 2, 2);
  const auto ncert = exact_cert_nonseq(narrow, 0, rat("1/2"), 2, rat("1/2"), rat("1/40"));
  const auto ninst = build_block_design_nonseq(narrow, ncert, 6, 2);
  for (size_t t = 0; t < 4; ++t) CHECK(ninst.design->indices[t] == 0);

  CHECK_THROWS_AS(build_block_design_nonseq(narrow, ncert, 3, 2), std::invalid_argument);
}

TEST_CASE("majority aggregation of sign blocks matches the >= 0 indicator") {
  // d = 1, gap 1/2 -> k = 4; inspect the mu labels reached by specific paths
  const auto cls = two_value_product(4, -2, 0, 1);
  const auto cert = exact_cert_seq(cls, rat("-1/2"), 0, 1, rat("1/2"), rat("1/40"));
  const auto inst = build_block_tree_seq(cls, cert, 6, 2);
  const auto realizer_value = [&](int sign) {
    return cls.value(cert.realizers[sign > 0 ? 1 : 0], 0);
  };
  // block signs (+1,-1,-1,-1) sum < 0 -> eps~ = -1; (+1,+1,-1,+1) -> +1;
  // exact tie (+1,+1,-1,-1) -> +1 by the >= 0 rule
  const Path minus{{1, -1, -1, -1, 1, 1}};
  CHECK(inst.mu_tree->at(minus, 6) == realizer_value(-1));
  const Path plus{{1, 1, -1, 1, 1, 1}};
  CHECK(inst.mu_tree->at(plus, 6) == realizer_value(+1));
  const Path tie{{1, 1, -1, -1, 1, 1}};
  CHECK(inst.mu_tree->at(tie, 6) == realizer_value(+1));
}

TEST_CASE("block tree pads with x_0 after a short block") {
  // d = 1, gap 1 -> k = 1, then two padded rounds against f(x_0)
  const auto cls = two_value_product(2, -2, 0, 1);
  const auto cert = exact_cert_seq(cls, rat("-1"), 0, 1, 1, rat("1/20"));
  const auto inst = build_block_tree_seq(cls, cert, 3, 2);
  const Path p{{1, -1, 1}};
  CHECK(inst.x_tree->at(p, 1) == cert.x_tree.at_node(1));
  CHECK(inst.x_tree->at(p, 2) == 0);
  CHECK(inst.x_tree->at(p, 3) == 0);
  const Rational fx0 = cls.value(cert.realizers[1], 0);
  CHECK(inst.mu_tree->at(p, 2) == fx0);
  CHECK(inst.mu_tree->at(p, 3) == fx0);

  // first block alone exceeds a zero budget
  CHECK_THROWS_AS(build_block_tree_seq(cls, cert, 0, 2), std::invalid_argument);
}

TEST_CASE("lower-bound constants hold on constructed instances") {
  // nonsequential: value >= (d-1)/50 - 4 at C = 2
  for (int d = 1; d <= 3; ++d) {
    const auto cls = two_value_product(2, -1, 1, d);
    const auto cert = exact_cert_nonseq(cls, rat("-1/2"), rat("1/2"), d, 1, rat("1/20"));
    const int n = d + 3;
    const auto inst = build_block_design_nonseq(cls, cert, n, 2);
    const Rational value = offset_rad_nonseq_exact(inst);
    CHECK(value >= Rational(d - 1, 50) - 4);
  }

  // sequential: value >= d/50 at C = 2
  for (int d = 1; d <= 3; ++d) {
    const auto cls = two_value_product(2, -1, 1, d);
    const auto cert = exact_cert_seq(cls, rat("-1/2"), rat("1/2"), d, 1, rat("1/20"));
    const int n = d + 2;
    const auto inst = build_block_tree_seq(cls, cert, n, 2);
    const Rational value = offset_rad_seq_exact(inst);
    CHECK(value >= Rational(d, 50));
    // exhaustive MC agrees with the tree walk
    CHECK(offset_rad_mc(inst, uint64_t{1} << n, 0, true).mean == value);
  }

  // the search's own certificates feed the builder too
  const auto cls = two_value_product(2, -1, 1, 2);
  const auto found = seq_gapped_dim_real(cls, kAbs, 1, rat("1/20"));
  REQUIRE(found.dim == 2);
  const auto inst = build_block_tree_seq(cls, found.certificate, 4, 2);
  CHECK(offset_rad_seq_exact(inst) >= Rational(2, 50));
}
