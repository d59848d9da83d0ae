// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "dimlab/constructions.hpp"
#include "dimlab/nonseq_cover.hpp"
#include "dimlab/nonseq_dims.hpp"
#include "dimlab/rademacher.hpp"
#include "dimlab/sequential.hpp"
#include "dimlab/verify.hpp"
#include "oracles.hpp"

using namespace dimlab;

namespace {

const Metric kAbs = Metric::absolute_difference();

struct Criterion {
  int number;
  std::string description;
  double budget_seconds;
  bool (*run)(std::string& detail);
};

int log2_int(const Rational& inv_alpha) {
  return static_cast<int>(std::lround(std::log2(to_double(inv_alpha))));
}

// --- criterion 1: log-gap class separation -------------------------------

bool criterion_log_gap(std::string& detail) {
  bool ok = true;
  for (const Rational& alpha : {Rational(1, 4), Rational(1, 8), Rational(1, 16)}) {
    const auto cls = log_gap_class_nonseq(alpha, to_int64(den(alpha)));
    const Rational beta = alpha / 4;
    const int d = gapped_dim_real(cls, kAbs, alpha, beta).dim;
    const int vc = fat_dim(cls, alpha).dim;
    const int want = log2_int(1 / alpha);
    detail += " alpha=" + to_string(alpha) + ":d=" + std::to_string(d) +
              ",vc=" + std::to_string(vc);
    ok = ok && d == 1 && vc >= want;
  }
  return ok;
}

// --- criterion 2: single-point grid class separation ----------------------

bool criterion_single_point(std::string& detail) {
  bool ok = true;
  for (const Rational& alpha : {Rational(1, 4), Rational(1, 8)}) {
    const auto cls = single_point_grid_class(alpha);
    const Rational beta = alpha / 8;
    const int d = seq_gapped_dim_real(cls, kAbs, alpha, beta).dim;
    const int sf = sfat_dim(cls, alpha).dim;
    const int want = log2_int(1 / alpha);
    detail += " alpha=" + to_string(alpha) + ":d=" + std::to_string(d) +
              ",sfat=" + std::to_string(sf);
    ok = ok && d == 1 && sf >= want;
  }
  return ok;
}

// --- criterion 3: lower-bound constants -----------------------------------

bool criterion_lower_bounds(std::string& detail) {
  const auto nonseq = verify("thm-2.10-const");
  const auto seq = verify("thm-3.8-const");
  size_t failures = 0;
  for (const auto& r : nonseq) failures += r.failed();
  for (const auto& r : seq) failures += r.failed();
  detail += " certificates=" + std::to_string(nonseq.size()) + "+" + std::to_string(seq.size()) +
            " failures=" + std::to_string(failures);
  return nonseq.size() >= 20 && seq.size() >= 20 && failures == 0;
}

// --- criterion 4: oracle equivalence on 200 random classes ----------------

bool criterion_oracles(std::string& detail) {
  int checked = 0, mismatches = 0;
  auto expect = [&](bool ok) {
    ++checked;
    if (!ok) ++mismatches;
  };

  for (uint64_t i = 0; i < 100; ++i) {  // integer classes
    CounterRng rng(40000 + i);
    const int m = 2 + static_cast<int>(rng.next_below(3));
    const int n_x = 1 + static_cast<int>(rng.next_below(4));
    const int n_f = 2 + static_cast<int>(rng.next_below(9));
    const auto cls = random_class(n_f, n_x, ValueGrid::integer_alphabet(m), 41000 + i);
    SampleDesign design;
    for (int x = 0; x < cls.n_points(); ++x) design.indices.push_back(x);
    const Rational alpha(1 + static_cast<int64_t>(rng.next_below(2)));

    expect(gapped_dim_integer(cls, kAbs, alpha).dim ==
           oracle::nonseq_dim_oracle(ShatterKind::GappedInteger, cls, kAbs, alpha, 0));
    expect(seq_gapped_dim_integer(cls, kAbs, alpha).dim ==
           oracle::seq_dim_oracle(ShatterKind::GappedInteger, cls, kAbs, alpha, 0, 3));
    expect(cover_min_exact(cls, design, kAbs, alpha).size ==
           oracle::cover_min_oracle(cls, design, kAbs, alpha));
    expect(packing_max_exact(cls, design, kAbs, alpha).size ==
           oracle::packing_max_oracle(cls, design, kAbs, alpha));
    const auto greedy = cover_greedy(cls, design, kAbs, alpha);
    expect(is_cover(cls, design, kAbs, alpha, greedy.cover) &&
           greedy.size >= cover_min_exact(cls, design, kAbs, alpha).size);
  }

  for (uint64_t i = 0; i < 100; ++i) {  // real classes
    CounterRng rng(50000 + i);
    const int64_t q = 1 + static_cast<int64_t>(rng.next_below(2));
    const int n_x = 1 + static_cast<int>(rng.next_below(3));
    const int n_f = 2 + static_cast<int>(rng.next_below(9));
    const auto cls = random_class(n_f, n_x, ValueGrid::real_grid(q), 51000 + i);
    SampleDesign design;
    for (int x = 0; x < cls.n_points(); ++x) design.indices.push_back(x);
    const bool wide = rng.next_below(2) == 0;
    const Rational alpha = wide ? Rational(1) : Rational(1, 2);
    const Rational beta = wide ? Rational(1, 4) : Rational(1, 8);

    expect(gapped_dim_real(cls, kAbs, alpha, beta).dim ==
           oracle::nonseq_dim_oracle(ShatterKind::GappedReal, cls, kAbs, alpha, beta));
    expect(fat_dim(cls, alpha).dim ==
           oracle::nonseq_dim_oracle(ShatterKind::Fat, cls, kAbs, alpha, 0));
    expect(fixed_scale_dim(cls, alpha).dim ==
           oracle::nonseq_dim_oracle(ShatterKind::FixedScale, cls, kAbs, alpha, 0));
    expect(sfat_dim(cls, alpha).dim ==
           oracle::seq_dim_oracle(ShatterKind::Fat, cls, kAbs, alpha, 0, 3));
    expect(seq_gapped_dim_real(cls, kAbs, alpha, beta).dim ==
           oracle::seq_dim_oracle(ShatterKind::GappedReal, cls, kAbs, alpha, beta, 3));
    expect(cover_min_exact(cls, design, kAbs, alpha).size ==
           oracle::cover_min_oracle(cls, design, kAbs, alpha));
    expect(packing_max_exact(cls, design, kAbs, alpha).size ==
           oracle::packing_max_oracle(cls, design, kAbs, alpha));
  }

  detail += " checks=" + std::to_string(checked) + " mismatches=" + std::to_string(mismatches);
  return mismatches == 0;
}

// --- criterion 5: the full inequality suite -------------------------------

bool criterion_verify_all(std::string& detail) {
  const auto reports = verify_all();
  size_t failures = 0;
  for (const auto& r : reports) failures += r.failed();
  detail += " checks=" + std::to_string(reports.size()) +
            " failures=" + std::to_string(failures);
  return !reports.empty() && failures == 0;
}

// --- criterion 6: fixed-scale equals fat on convexified classes -----------

bool criterion_convexity(std::string& detail) {
  const auto reports = verify("prop-fat-equivalence");
  const size_t classes = detail::convex_corpus().size();
  size_t failures = 0, skipped = 0;
  for (const auto& r : reports) {
    failures += r.failed();
    skipped += r.verdict.rfind("skipped", 0) == 0;
  }
  detail += " classes=" + std::to_string(classes) + " checks=" + std::to_string(reports.size()) +
            " failures=" + std::to_string(failures) + " skipped=" + std::to_string(skipped);
  return classes >= 10 && failures == 0 && skipped * 5 <= reports.size();
}

// --- criterion 7: determinism ----------------------------------------------

bool criterion_determinism(std::string& detail) {
  const std::string a = report_to_json(verify_all()).dump(2);
  const std::string b = report_to_json(verify_all()).dump(2);
  detail += " bytes=" + std::to_string(a.size());
  return !a.empty() && a == b;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "log-gap class: gapped dimension 1, fat dimension >= log2(1/alpha)", 10.0,
       criterion_log_gap},
      {2, "single-point grid class: sequential gapped 1, sfat >= log2(1/alpha)", 30.0,
       criterion_single_point},
      {3, "block constructions: offset values >= (d-1)/50 - 4 and d/50 at C=2", 300.0,
       criterion_lower_bounds},
      {4, "200 random classes: dimensions and covers equal brute-force oracles", 600.0,
       criterion_oracles},
      {5, "verify --all passes with zero failures", 900.0, criterion_verify_all},
      {6, "fixed-scale = fat on convexified classes, skips within 20%", 60.0,
       criterion_convexity},
      {7, "consecutive verify --all reports are byte-identical", 900.0, criterion_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail += std::string(" exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && seconds <= c.budget_seconds;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": " << c.description
              << " (" << seconds << " s, budget " << c.budget_seconds << " s)" << detail << "\n";
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
            << criteria.size() - failures << "/" << criteria.size() << ")\n";
  return failures == 0 ? 0 : 1;
}
