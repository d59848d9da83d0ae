#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dimlab/combinatorics.hpp"
#include "dimlab/constructions.hpp"
#include "dimlab/core.hpp"
#include "dimlab/games.hpp"
#include "dimlab/io.hpp"
#include "dimlab/nonseq_cover.hpp"
#include "dimlab/nonseq_dims.hpp"
#include "dimlab/rademacher.hpp"
#include "dimlab/sequential.hpp"

namespace dimlab {

// Outcome of one theorem-inequality check on one instance. runtime_ms is
// console-side diagnostics; the serialized report omits it so that repeated
// runs are byte-identical.
struct VerdictReport {
  std::string theorem_id;
  std::string instance_fingerprint;
  std::string lhs;
  std::string rhs;
  std::string verdict;  // "pass" | "fail" | "skipped(<reason>)"
  double runtime_ms = 0.0;

  bool failed() const { return verdict == "fail"; }
};

inline Json to_json(const VerdictReport& r) {
  Json j;
  j["theorem_id"] = r.theorem_id;
  j["instance"] = r.instance_fingerprint;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["verdict"] = r.verdict;
  return j;
}

namespace detail {

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string fingerprint(const std::string& payload) {
  std::ostringstream os;
  os << std::hex << fnv1a64(payload);
  return os.str();
}

inline std::string class_key(const FunctionClass& cls) { return to_json(cls).dump(); }

struct Check {
  std::string id;
  std::string payload;  // fingerprint input
  std::string lhs;
  std::string rhs;
  bool pass = false;
  std::optional<std::string> skip_reason;

  VerdictReport report() const {
    VerdictReport r;
    r.theorem_id = id;
    r.instance_fingerprint = fingerprint(id + "|" + payload);
    r.lhs = lhs;
    r.rhs = rhs;
    r.verdict = skip_reason ? "skipped(" + *skip_reason + ")" : (pass ? "pass" : "fail");
    return r;
  }
};

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline constexpr double kLogSlack = 1e-9;

// float-guarded right-hand sides record the slack they carry
inline std::string fmt_guarded(double rhs) { return fmt_double(rhs) + " + 1e-09 slack"; }

// ---------------------------------------------------------------------------
// shared corpora (all seeded; every run sees the same instances)
// ---------------------------------------------------------------------------

struct RealInstance {
  FunctionClass cls;
  Rational alpha;
  Rational beta;
};

inline const Metric& abs_metric() {
  static const Metric m = Metric::absolute_difference();
  return m;
}

inline std::vector<FunctionClass> integer_corpus() {
  std::vector<FunctionClass> out;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const int m = 2 + static_cast<int>(seed % 3);
    out.push_back(random_class(4 + static_cast<int>(seed % 6), 2 + static_cast<int>(seed % 3),
                               ValueGrid::integer_alphabet(m), 1000 + seed));
  }
  out.push_back(FunctionClass({"x1", "x2", "x3"}, ValueGrid::integer_alphabet(2),
                              {{1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {1, 2, 2},
                               {2, 1, 1}, {2, 1, 2}, {2, 2, 1}, {2, 2, 2}}));
  return out;
}

inline std::vector<FunctionClass> real_corpus() {
  std::vector<FunctionClass> out;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const int64_t q = seed % 2 == 0 ? 4 : 8;
    out.push_back(random_class(4 + static_cast<int>(seed % 6), 2 + static_cast<int>(seed % 2),
                               ValueGrid::real_grid(q), 2000 + seed));
  }
  out.push_back(log_gap_class_nonseq(Rational(1, 8), 8));
  out.push_back(interval_product_class({{-4, 0}, {0, 2}}, 4));
  out.push_back(single_point_grid_class(Rational(1, 4)));
  return out;
}

// Convexified classes for the fixed-scale checks. Base values are drawn
// from the half grid (even numerators) so pairwise midpoints land back on
// the grid and the closure genuinely fills in.
inline std::vector<FunctionClass> convex_corpus() {
  std::vector<FunctionClass> out;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const int64_t q = seed % 2 == 0 ? 4 : 8;
    const auto coarse = random_class(2 + static_cast<int>(seed % 3), 1 + static_cast<int>(seed % 2),
                                     ValueGrid::real_grid(q / 2), 3000 + seed);
    std::vector<std::vector<int64_t>> doubled;
    for (const auto& row : coarse.rows()) {
      std::vector<int64_t> r;
      for (int64_t v : row) r.push_back(2 * v);
      doubled.push_back(std::move(r));
    }
    const FunctionClass base(coarse.domain_labels(), ValueGrid::real_grid(q), doubled);
    out.push_back(convexify(base, 2));
  }
  out.push_back(convexify(FunctionClass({"x1"}, ValueGrid::real_grid(4), {{-4}, {4}}), 4));
  out.push_back(interval_product_class({{-2, 2}, {-4, 0}}, 4));
  return out;
}

inline std::vector<std::pair<Rational, Rational>> real_scales() {
  return {{Rational(1, 2), Rational(1, 8)}, {Rational(1), Rational(1, 4)}};
}

// Certificates with all witness gaps exactly `gap`, for the lower-bound
// constructions: witness pairs are restricted to attained values a < b with
// b - a == gap, the realizer condition checked directly.
inline std::optional<ShatterCertificate> find_exact_gap_cert(const FunctionClass& cls,
                                                             const Rational& gap,
                                                             const Rational& beta, int max_d) {
  const int n = cls.n_points();
  for (int d = std::min(n, max_d); d >= 1; --d) {
    std::vector<int> points;
    std::vector<std::vector<WitnessPair>> options;
    ShatterCertificate found;
    auto try_witnesses = [&](auto&& self, size_t t, std::vector<WitnessPair>& ws) -> bool {
      if (t == points.size()) {
        SampleDesign design{points};
        const auto check =
            is_shattered_nonseq(ShatterKind::GappedReal, cls, abs_metric(), design, ws, gap, beta);
        if (!check.shattered) return false;
        found.points = design;
        found.witnesses = ws;
        found.realizers = check.realizers;
        return true;
      }
      for (const WitnessPair& s : options[t]) {
        ws[t] = s;
        if (self(self, t + 1, ws)) return true;
      }
      return false;
    };
    auto subsets = [&](auto&& self, int first) -> bool {
      if (static_cast<int>(points.size()) == d) {
        options.clear();
        for (int x : points) {
          std::vector<WitnessPair> pairs;
          const auto attained = cls.attained_at(x);
          for (int64_t a : attained)
            for (int64_t b : attained)
              if (cls.grid().value(b) - cls.grid().value(a) == gap)
                pairs.push_back({cls.grid().value(a), cls.grid().value(b)});
          if (pairs.empty()) return false;
          options.push_back(std::move(pairs));
        }
        std::vector<WitnessPair> ws(points.size());
        return try_witnesses(try_witnesses, 0, ws);
      }
      for (int x = first; x < n; ++x) {
        points.push_back(x);
        if (self(self, x + 1)) return true;
        points.pop_back();
      }
      return false;
    };
    if (subsets(subsets, 0)) return found;
  }
  return std::nullopt;
}

// Constant-level tree certificate from a non-sequential one.
inline TreeShatterCertificate lift_cert_to_tree(const FunctionClass& cls,
                                                const ShatterCertificate& cert,
                                                const Rational& alpha, const Rational& beta) {
  TreeShatterCertificate tree_cert;
  tree_cert.x_tree = LabeledTree<int>::constant_levels(cert.points.indices);
  tree_cert.witness_tree = LabeledTree<WitnessPair>::constant_levels(cert.witnesses);
  const auto check = is_tree_shattered(ShatterKind::GappedReal, cls, abs_metric(),
                                       tree_cert.x_tree, tree_cert.witness_tree, alpha, beta);
  if (!check.shattered) throw std::logic_error("constant-level lift must stay shattered");
  tree_cert.realizers = check.realizers;
  return tree_cert;
}

struct LowerBoundInstance {
  FunctionClass cls;
  ShatterCertificate cert;
  Rational gap;
};

// Random + constructed certificates with gaps in {1/2, 1}.
inline std::vector<LowerBoundInstance> lower_bound_corpus() {
  std::vector<LowerBoundInstance> out;
  const Rational beta(1, 40);
  for (const auto& [gap, dims] : std::vector<std::pair<Rational, std::vector<int>>>{
           {Rational(1), {1, 2, 3, 4, 5, 6}}, {Rational(1, 2), {1, 2, 3}}}) {
    for (int d : dims) {
      // {lo, hi}^d construction realizing the witnesses exactly
      const int64_t q = 4;
      const int64_t lo = -to_int64(num(gap * q / 2));
      const int64_t hi = lo + to_int64(num(gap * q));
      std::vector<std::vector<int64_t>> rows;
      for (uint32_t bits = 0; bits < (uint32_t{1} << d); ++bits) {
        std::vector<int64_t> row;
        for (int t = 0; t < d; ++t) row.push_back((bits >> (d - 1 - t)) & 1 ? hi : lo);
        rows.push_back(std::move(row));
      }
      std::vector<std::string> labels;
      for (int t = 1; t <= d; ++t) labels.push_back("x" + std::to_string(t));
      FunctionClass cls(labels, ValueGrid::real_grid(q), rows);
      auto cert = find_exact_gap_cert(cls, gap, beta, d);
      if (cert && static_cast<int>(cert->points.size()) == d)
        out.push_back({cls, *cert, gap});
    }
  }
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto cls = random_class(6 + static_cast<int>(seed % 5), 2 + static_cast<int>(seed % 3),
                                  ValueGrid::real_grid(4), 5200 + seed);
    for (const Rational& gap : {Rational(1), Rational(1, 2)}) {
      const auto cert = find_exact_gap_cert(cls, gap, beta, 3);
      if (cert) out.push_back({cls, *cert, gap});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// checkers
// ---------------------------------------------------------------------------

using CheckerFn = std::function<std::vector<Check>()>;

inline std::vector<Check> check_khintchine() {
  std::vector<Check> out;
  for (int k = 1; k <= 30; ++k) {
    const Rational m = khintchine_abs_mean(k);
    Check c{"khintchine", "k=" + std::to_string(k), to_string(Rational(m * m)),
            to_string(Rational(1, 2 * k)), m * m >= Rational(1, 2 * k), std::nullopt};
    out.push_back(c);
  }
  return out;
}

inline std::vector<Check> check_g_m_recurrence() {
  std::vector<Check> out;
  for (int64_t m : {2, 3, 5}) {
    bool ok = true;
    for (int64_t n = 1; n <= 12 && ok; ++n)
      for (int64_t d = 1; d <= 12 && ok; ++d)
        ok = g_m(n, d, m) == g_m(n - 1, d, m) + (m - 1) * g_m(n - 1, d - 1, m);
    // the (enM/d)^d upper bound, float-guarded
    bool bound_ok = true;
    for (int64_t n = 1; n <= 12 && bound_ok; ++n)
      for (int64_t d = 1; d <= n && bound_ok; ++d)
        bound_ok = std::log(g_m(n, d, m).convert_to<double>()) <=
                   d * std::log(std::exp(1.0) * double(n) * double(m) / double(d)) + kLogSlack;
    out.push_back({"g-m-recurrence", "M=" + std::to_string(m), "recurrence+bound", "exact",
                   ok && bound_ok, std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_lemma_2_3() {
  std::vector<Check> out;
  for (const auto& cls : integer_corpus()) {
    SampleDesign design;
    for (int x = 0; x < cls.n_points(); ++x) design.indices.push_back(x);
    for (const Rational& alpha : {Rational(1), Rational(2)}) {
      const auto cover = cover_min_exact(cls, design, abs_metric(), alpha);
      const int d = gapped_dim_integer(cls, abs_metric(), alpha).dim;
      const double lhs = std::log(cover.size.convert_to<double>());
      const double log_enm =
          std::log(std::exp(1.0) * double(design.size()) * double(cls.grid().m));
      const double rhs = 16.0 * d * log_enm * log_enm;
      out.push_back({"lemma-2.3", class_key(cls) + "|alpha=" + to_string(alpha), fmt_double(lhs),
                     fmt_guarded(rhs), lhs <= rhs + kLogSlack, std::nullopt});
    }
  }
  return out;
}

inline std::vector<Check> check_prop_2_5() {
  std::vector<Check> out;
  for (const auto& cls : real_corpus()) {
    SampleDesign design;
    for (int x = 0; x < cls.n_points(); ++x) design.indices.push_back(x);
    for (const auto& [alpha, beta] : real_scales()) {
      if (den(Rational((alpha + beta) * cls.grid().q)) != 1) continue;  // keep grid centers exact
      const auto cover = cover_min_exact(cls, design, abs_metric(), alpha + beta);
      const int d = gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
      const double lhs = std::log(cover.size.convert_to<double>());
      const double lg =
          std::log(2.0 * std::exp(1.0) * double(design.size()) / to_double(beta));
      const double rhs = 16.0 * d * lg * lg;
      out.push_back({"prop-2.5",
                     class_key(cls) + "|alpha=" + to_string(alpha) + "|beta=" + to_string(beta),
                     fmt_double(lhs), fmt_guarded(rhs), lhs <= rhs + kLogSlack, std::nullopt});
    }
  }
  return out;
}

inline std::vector<Check> check_covering_packing() {
  std::vector<Check> out;
  auto run = [&](const FunctionClass& cls, const Rational& alpha) {
    SampleDesign design;
    for (int x = 0; x < cls.n_points(); ++x) design.indices.push_back(x);
    const auto cover = cover_min_exact(cls, design, abs_metric(), alpha);
    const auto pack = packing_max_exact(cls, design, abs_metric(), alpha);
    out.push_back({"covering-packing", class_key(cls) + "|alpha=" + to_string(alpha),
                   cover.size.str(), std::to_string(pack.size), cover.size <= pack.size,
                   std::nullopt});
  };
  for (const auto& cls : integer_corpus()) run(cls, Rational(1));
  for (const auto& cls : real_corpus()) run(cls, Rational(1, 2));
  return out;
}

inline std::vector<Check> check_prop_2_7() {
  std::vector<Check> out;
  for (const auto& cls : real_corpus())
    for (const auto& [alpha, beta] : real_scales()) {
      const int lhs = gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
      const int rhs = fat_dim(cls, alpha - 2 * beta).dim;
      out.push_back({"prop-2.7",
                     class_key(cls) + "|alpha=" + to_string(alpha) + "|beta=" + to_string(beta),
                     std::to_string(lhs), std::to_string(rhs), lhs <= rhs, std::nullopt});
    }
  return out;
}

inline std::vector<Check> check_prop_2_8() {
  std::vector<Check> out;
  for (const auto& cls : real_corpus())
    for (const auto& [alpha, beta] : real_scales()) {
      const int d = gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
      const int vc = fat_dim(cls, 3 * (alpha + beta)).dim;
      Check c{"prop-2.8",
              class_key(cls) + "|alpha=" + to_string(alpha) + "|beta=" + to_string(beta),
              "", "", false, std::nullopt};
      if (d == 0) {
        c.lhs = std::to_string(vc);
        c.rhs = "0";
        c.pass = vc == 0;
      } else {
        const double rhs = 288.0 * d * std::pow(std::log(384.0 * d / to_double(beta)), 2);
        c.lhs = std::to_string(vc);
        c.rhs = fmt_guarded(rhs);
        c.pass = static_cast<double>(vc) <= rhs + kLogSlack;
      }
      out.push_back(c);
    }
  return out;
}

// The convexity averaging construction, simulated exactly: starting from the
// fat certificate's realizers, each coordinate is pinned to its witness
// vertex by a convex combination with the sign-flipped realizer. Returns
// true when every intermediate combination stays inside the class, which
// certifies fixed-scale shattering of the same points and witnesses.
inline bool averaging_stays_in_class(const FunctionClass& cls, const ShatterCertificate& cert,
                                     const Rational& alpha) {
  const int d = static_cast<int>(cert.points.size());
  if (d == 0) return true;
  std::map<std::vector<int64_t>, int> row_index;
  for (int f = 0; f < cls.n_functions(); ++f) row_index[cls.rows()[static_cast<size_t>(f)]] = f;

  const auto patterns = sign_patterns(d);
  std::vector<std::vector<Rational>> cur;
  for (const Path& eps : patterns) {
    const int f = cert.realizers[pattern_index(eps)];
    std::vector<Rational> row;
    for (int x = 0; x < cls.n_points(); ++x) row.push_back(cls.value(f, x));
    cur.push_back(std::move(row));
  }
  for (int i = 0; i < d; ++i) {
    const int x_i = cert.points.indices[static_cast<size_t>(i)];
    const Rational s_i = cert.witnesses[static_cast<size_t>(i)].lo;
    std::vector<std::vector<Rational>> next(cur.size());
    for (size_t p = 0; p < patterns.size(); ++p) {
      const Path& eps = patterns[p];
      Path flipped = eps;
      flipped.signs[static_cast<size_t>(i)] *= -1;
      const auto& f_row = cur[p];
      const auto& g_row = cur[pattern_index(flipped)];
      const Rational target = s_i + eps[static_cast<size_t>(i)] * alpha / 2;
      const Rational denom = g_row[static_cast<size_t>(x_i)] - f_row[static_cast<size_t>(x_i)];
      Rational lam;
      if (denom == 0) {
        if (f_row[static_cast<size_t>(x_i)] != target) return false;
        lam = 1;
      } else {
        lam = (target - g_row[static_cast<size_t>(x_i)]) / (-denom);
        if (lam < 0 || lam > 1) return false;
      }
      std::vector<Rational> combo(f_row.size());
      std::vector<int64_t> nums(f_row.size());
      for (size_t x = 0; x < f_row.size(); ++x) {
        combo[x] = lam * f_row[x] + (1 - lam) * g_row[x];
        const Rational scaled = combo[x] * cls.grid().q;
        if (den(scaled) != 1) return false;  // leaves the grid
        nums[x] = to_int64(num(scaled));
      }
      if (!row_index.count(nums)) return false;  // leaves the class
      next[p] = std::move(combo);
    }
    cur = std::move(next);
  }
  // every final function sits exactly on the witness vertices
  for (size_t p = 0; p < patterns.size(); ++p)
    for (int t = 0; t < d; ++t) {
      const Rational v = cur[p][static_cast<size_t>(cert.points.indices[static_cast<size_t>(t)])];
      const Rational s = cert.witnesses[static_cast<size_t>(t)].lo;
      if (patterns[p][static_cast<size_t>(t)] * (v - s) != alpha / 2) return false;
    }
  return true;
}

inline std::vector<Check> check_fat_equivalence() {
  std::vector<Check> out;
  for (const auto& cls : convex_corpus())
    for (const Rational& alpha : {Rational(1, 2), Rational(1, 4)}) {
      const auto fat = fat_dim(cls, alpha);
      const auto fixed = fixed_scale_dim(cls, alpha);
      Check c{"prop-fat-equivalence", class_key(cls) + "|alpha=" + to_string(alpha),
              std::to_string(fat.dim), std::to_string(fixed.dim), fat.dim == fixed.dim,
              std::nullopt};
      if (!c.pass && !averaging_stays_in_class(cls, fat.certificate, alpha))
        c.skip_reason = "averaging step leaves the grid closure at this alpha";
      out.push_back(c);
    }
  return out;
}

inline std::vector<Check> check_prop_2_8_convex() {
  std::vector<Check> out;
  for (const auto& cls : convex_corpus())
    for (const auto& [alpha, beta] : real_scales()) {
      const int vc = fat_dim(cls, alpha).dim;
      const int d = gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
      Check c{"prop-2.8-convex",
              class_key(cls) + "|alpha=" + to_string(alpha) + "|beta=" + to_string(beta),
              std::to_string(vc), std::to_string(d), vc <= d, std::nullopt};
      if (!c.pass && fixed_scale_dim(cls, alpha).dim < vc)
        c.skip_reason = "grid closure is not convex at this alpha (vc_fix < vc)";
      out.push_back(c);
    }
  return out;
}

inline std::vector<Check> check_prop_2_9() {
  std::vector<Check> out;
  for (const Rational& alpha : {Rational(1, 4), Rational(1, 8), Rational(1, 16)}) {
    const int64_t q = to_int64(den(alpha));
    const auto cls = log_gap_class_nonseq(alpha, q);
    const Rational beta = alpha / 4;
    const int d = gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
    const int vc = fat_dim(cls, alpha).dim;
    const int logd = static_cast<int>(std::lround(std::log2(to_double(1 / alpha))));
    out.push_back({"prop-2.9", "alpha=" + to_string(alpha) + "|gapped", std::to_string(d), "1",
                   d == 1, std::nullopt});
    out.push_back({"prop-2.9", "alpha=" + to_string(alpha) + "|fat", std::to_string(vc),
                   ">=" + std::to_string(logd), vc >= logd, std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_prop_3_9() {
  std::vector<Check> out;
  for (const Rational& alpha : {Rational(1, 4), Rational(1, 8)}) {
    const auto cls = single_point_grid_class(alpha);
    const Rational beta = alpha / 8;  // the proof's triangle step needs alpha > 4 beta
    const int d = seq_gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
    const int sf = sfat_dim(cls, alpha).dim;
    const int logd = static_cast<int>(std::lround(std::log2(to_double(1 / alpha))));
    out.push_back({"prop-3.9", "alpha=" + to_string(alpha) + "|gapped", std::to_string(d), "1",
                   d == 1, std::nullopt});
    out.push_back({"prop-3.9", "alpha=" + to_string(alpha) + "|sfat", std::to_string(sf),
                   ">=" + std::to_string(logd), sf >= logd, std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_prop_d_less_f() {
  std::vector<Check> out;
  for (const auto& cls : real_corpus())
    for (const auto& [alpha, beta] : real_scales()) {
      const int lhs = seq_gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
      const int rhs = sfat_dim(cls, alpha - 2 * beta).dim;
      out.push_back({"prop-d-less-f",
                     class_key(cls) + "|alpha=" + to_string(alpha) + "|beta=" + to_string(beta),
                     std::to_string(lhs), std::to_string(rhs), lhs <= rhs, std::nullopt});
    }
  return out;
}

inline std::vector<Check> check_prop_f_less_d() {
  std::vector<Check> out;
  for (const auto& cls : real_corpus())
    for (const auto& [alpha, beta] : real_scales()) {
      const int d = seq_gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
      const int sf = sfat_dim(cls, 3 * (alpha + beta)).dim;
      Check c{"prop-f-less-d",
              class_key(cls) + "|alpha=" + to_string(alpha) + "|beta=" + to_string(beta),
              std::to_string(sf), "", false, std::nullopt};
      if (d == 0) {
        c.rhs = "0";
        c.pass = sf == 0;
      } else {
        const double rhs = 4.0 * d * std::log(12.0 * d / to_double(beta));
        c.rhs = fmt_guarded(rhs);
        c.pass = static_cast<double>(sf) <= rhs + kLogSlack;
      }
      out.push_back(c);
    }
  return out;
}

inline std::vector<Check> check_lemma_3_3() {
  std::vector<Check> out;
  for (const auto& cls : integer_corpus()) {
    CounterRng rng(fnv1a64(class_key(cls)));
    const int depth = 2 + static_cast<int>(rng.next_below(2));
    std::vector<int> labels(LabeledTree<int>::node_count(depth));
    for (auto& l : labels) l = static_cast<int>(rng.next_below(static_cast<uint64_t>(cls.n_points())));
    const LabeledTree<int> x_tree(depth, labels);
    for (const Rational& alpha : {Rational(1), Rational(2)}) {
      const auto cover = seq_cover_construct(cls, abs_metric(), x_tree, alpha);
      const int d = seq_gapped_dim_integer(cls, abs_metric(), alpha).dim;
      const bool valid = is_seq_cover(cls, abs_metric(), x_tree, alpha, cover);
      const bool counted = BigInt(cover.trees.size()) <= g_m(depth, d, cls.grid().m);
      const double lhs = std::log(double(cover.trees.size()));
      const double rhs = d * std::log(std::exp(1.0) * depth * double(cls.grid().m));
      out.push_back({"lemma-3.3", class_key(cls) + "|alpha=" + to_string(alpha),
                     std::to_string(cover.trees.size()), g_m(depth, d, cls.grid().m).str(),
                     valid && counted && lhs <= rhs + kLogSlack, std::nullopt});
    }
  }
  return out;
}

// Real-to-integer cover transfer: discretize F to M = floor(2/beta) levels,
// cover the discretized class under the induced tabulated metric, lift the
// cover back and validate it at scale alpha + beta.
inline std::vector<Check> check_prop_3_5() {
  std::vector<Check> out;
  const Rational alpha(1), beta(1, 4);
  const int64_t m = to_int64(floor_big(2 / beta));
  std::vector<Rational> levels;
  for (int64_t i = 1; i <= m; ++i) levels.push_back(Rational(2 * i - 1, m) - 1);
  std::vector<std::vector<Rational>> table(static_cast<size_t>(m),
                                           std::vector<Rational>(static_cast<size_t>(m)));
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < m; ++j)
      table[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          abs_rat(levels[static_cast<size_t>(i)] - levels[static_cast<size_t>(j)]);
  const auto int_grid = ValueGrid::integer_alphabet(m);
  const Metric c_prime = Metric::tabulated(int_grid, table);

  for (uint64_t seed = 0; seed < 4; ++seed) {
    const auto cls = random_class(5 + static_cast<int>(seed), 2, ValueGrid::real_grid(4),
                                  7000 + seed);
    // nearest-level discretization (ties toward the lower level)
    std::vector<std::vector<int64_t>> bar_rows;
    for (const auto& row : cls.rows()) {
      std::vector<int64_t> bar;
      for (int64_t v : row) {
        const Rational value = cls.grid().value(v);
        int64_t best = 1;
        Rational best_err = abs_rat(value - levels[0]);
        for (int64_t i = 2; i <= m; ++i) {
          const Rational err = abs_rat(value - levels[static_cast<size_t>(i - 1)]);
          if (err < best_err) {
            best = i;
            best_err = err;
          }
        }
        if (best_err > beta) throw std::logic_error("levels must beta-cover [-1, 1]");
        bar.push_back(best);
      }
      bar_rows.push_back(std::move(bar));
    }
    const FunctionClass bar_cls(cls.domain_labels(), int_grid, bar_rows);

    CounterRng rng(7100 + seed);
    const int depth = 2;
    std::vector<int> labels(LabeledTree<int>::node_count(depth));
    for (auto& l : labels) l = static_cast<int>(rng.next_below(static_cast<uint64_t>(cls.n_points())));
    const LabeledTree<int> x_tree(depth, labels);

    const int d_bar = seq_gapped_dim_integer(bar_cls, c_prime, alpha).dim;
    const int d_real = seq_gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
    const auto bar_cover = seq_cover_construct(bar_cls, c_prime, x_tree, alpha);

    // lift to real-valued trees and validate the (alpha + beta)-cover; the
    // lifted trees stay on the class grid because levels are multiples of 1/m
    bool lifted_valid = true;
    for (int f = 0; f < cls.n_functions() && lifted_valid; ++f)
      for (const Path& eps : sign_patterns(depth)) {
        bool covered = false;
        for (const auto& bar_tree : bar_cover.trees) {
          bool ok = true;
          for (int t = 1; t <= depth && ok; ++t) {
            const Rational u = levels[static_cast<size_t>(bar_tree.at(eps, t) - 1)];
            ok = abs_rat(cls.value(f, x_tree.at(eps, t)) - u) <= alpha + beta;
          }
          if (ok) {
            covered = true;
            break;
          }
        }
        if (!covered) {
          lifted_valid = false;
          break;
        }
      }

    const bool dim_transfer = d_bar <= d_real;
    const bool counted = BigInt(bar_cover.trees.size()) <= g_m(depth, d_bar, m);
    const double lhs = std::log(double(bar_cover.trees.size()));
    const double rhs = d_real * std::log(std::exp(1.0) * depth * double(m));
    out.push_back({"prop-3.5", class_key(cls), std::to_string(bar_cover.trees.size()),
                   fmt_guarded(rhs), lifted_valid && dim_transfer && counted &&
                                         lhs <= rhs + kLogSlack,
                   std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_thm_2_10_const() {
  std::vector<Check> out;
  for (const auto& inst : lower_bound_corpus()) {
    const int d = static_cast<int>(inst.cert.points.size());
    int budget = 0;
    for (int t = 0; t + 1 < d; ++t)
      budget += static_cast<int>(block_length(inst.cert.witnesses[static_cast<size_t>(t)].hi -
                                              inst.cert.witnesses[static_cast<size_t>(t)].lo));
    const int n = std::min(kOffsetExactCap, budget + 4);
    const auto offset = build_block_design_nonseq(inst.cls, inst.cert, n, 2);
    const Rational value = offset_rad_nonseq_exact(offset);
    const Rational bound = Rational(d - 1, 50) - 4;
    out.push_back({"thm-2.10-const",
                   class_key(inst.cls) + "|gap=" + to_string(inst.gap) + "|d=" + std::to_string(d),
                   to_string(value), to_string(bound), value >= bound, std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_thm_3_8_const() {
  std::vector<Check> out;
  for (const auto& inst : lower_bound_corpus()) {
    const int d = static_cast<int>(inst.cert.points.size());
    const int k = static_cast<int>(block_length(inst.gap));
    const int n = d * k + 2;
    if (n > 14) continue;  // keep the exact path enumeration fast
    const auto cert = lift_cert_to_tree(inst.cls, inst.cert, inst.gap, Rational(1, 40));
    const auto offset = build_block_tree_seq(inst.cls, cert, n, 2);
    const Rational value = offset_rad_seq_exact(offset);
    const Rational bound(d, 50);
    out.push_back({"thm-3.8-const",
                   class_key(inst.cls) + "|gap=" + to_string(inst.gap) + "|d=" + std::to_string(d),
                   to_string(value), to_string(bound), value >= bound, std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_lemma_2_11() {
  std::vector<Check> out;
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const auto cls = random_class(4, 2, ValueGrid::real_grid(2), 8900 + seed);
    CounterRng rng(60 + seed);
    const int n = 2 + static_cast<int>(seed % 2);
    SampleDesign design;
    std::vector<Rational> mu;
    for (int t = 0; t < n; ++t) {
      design.indices.push_back(static_cast<int>(rng.next_below(2)));
      mu.push_back(Rational(static_cast<int64_t>(rng.next_below(5)) - 2, 2));
    }
    const Rational offset =
        offset_rad_nonseq_exact(OffsetInstance::nonseq(cls, design, mu, 2));
    GameConfig cfg{cls, n, GameConfig::default_grid(), GameConfig::default_grid(), design, {}};
    const Rational game = minimax_transductive(cfg);
    out.push_back({"lemma-2.11", class_key(cls) + "|n=" + std::to_string(n), to_string(game),
                   to_string(offset), game >= offset, std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_cor_2_12() {
  std::vector<Check> out;
  // block designs small enough for the exact game
  for (uint64_t seed = 0; seed < 3; ++seed) {
    const auto cls = random_class(4, 2, ValueGrid::real_grid(2), 12000 + seed);
    const auto cert = find_exact_gap_cert(cls, Rational(1), Rational(1, 2), 1);
    if (!cert) continue;
    const int n = 3;
    const auto inst = build_block_design_nonseq(cls, *cert, n, 2);
    const Rational offset = offset_rad_nonseq_exact(inst);
    GameConfig cfg{cls,          n, GameConfig::default_grid(), GameConfig::default_grid(),
                   *inst.design, {}};
    const Rational game = minimax_transductive(cfg);
    const Rational bound = Rational(0, 50) - 4;  // d = 1
    out.push_back({"cor-2.12", class_key(cls), to_string(game), to_string(offset),
                   game >= offset && game >= bound, std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_cor_3_10() {
  std::vector<Check> out;
  for (uint64_t seed = 0; seed < 3; ++seed) {
    const auto cls = random_class(4, 2, ValueGrid::real_grid(2), 13000 + seed);
    const auto flat = find_exact_gap_cert(cls, Rational(1), Rational(1, 2), 1);
    if (!flat) continue;
    const auto cert = lift_cert_to_tree(cls, *flat, Rational(1), Rational(1, 2));
    const int n = 2;  // keeps the online game under the state cap
    const auto inst = build_block_tree_seq(cls, cert, n, 2);
    const Rational offset = offset_rad_seq_exact(inst);
    std::vector<int> contexts;
    for (int x = 0; x < cls.n_points(); ++x) contexts.push_back(x);
    GameConfig cfg{cls,          n,       GameConfig::default_grid(), GameConfig::default_grid(),
                   std::nullopt, contexts};
    const Rational game = minimax_online_seq(cfg);
    out.push_back({"cor-3.10", class_key(cls), to_string(game), to_string(offset),
                   game >= offset && game >= Rational(1, 50), std::nullopt});
  }
  return out;
}

inline std::vector<Check> check_constant_tree_reduction() {
  std::vector<Check> out;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto cls = random_class(5, 2, ValueGrid::real_grid(2), 14000 + seed);
    const Rational alpha(1, 2), beta(1, 8);
    const bool sfat_ok = sfat_dim(cls, alpha).dim >= fat_dim(cls, alpha).dim;
    const bool gapped_ok = seq_gapped_dim_real(cls, abs_metric(), alpha, beta).dim >=
                           gapped_dim_real(cls, abs_metric(), alpha, beta).dim;
    out.push_back({"constant-tree-reduction", class_key(cls) + "|dims", "seq", "nonseq",
                   sfat_ok && gapped_ok, std::nullopt});
  }
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto cls = random_class(5, 2, ValueGrid::integer_alphabet(3), 14100 + seed);
    const bool dim_ok = seq_gapped_dim_integer(cls, abs_metric(), 1).dim >=
                        gapped_dim_integer(cls, abs_metric(), 1).dim;
    SampleDesign design{{0, 1}};
    const auto x_tree = LabeledTree<int>::constant_levels({0, 1});
    const bool cover_ok = seq_cover_min_bruteforce(cls, abs_metric(), x_tree, 1) ==
                          cover_min_exact(cls, design, abs_metric(), 1).size;
    out.push_back({"constant-tree-reduction", class_key(cls) + "|cover", "seq-min", "nonseq-min",
                   dim_ok && cover_ok, std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

struct CheckerEntry {
  std::string description;
  CheckerFn fn;
};

inline const std::map<std::string, CheckerEntry>& checker_registry() {
  static const std::map<std::string, CheckerEntry> registry = {
      {"khintchine", {"squared Khintchine lower bound for k <= 30", check_khintchine}},
      {"g-m-recurrence", {"g_M recurrence and (enM/d)^d bound", check_g_m_recurrence}},
      {"lemma-2.3", {"integer cover vs gapped dimension", check_lemma_2_3}},
      {"prop-2.5", {"real cover at alpha+beta vs gapped dimension", check_prop_2_5}},
      {"covering-packing", {"minimum cover <= maximum packing", check_covering_packing}},
      {"prop-2.7", {"gapped dimension <= fat dimension at alpha-2beta", check_prop_2_7}},
      {"prop-2.8", {"fat at 3(alpha+beta) log-bounded by gapped dimension", check_prop_2_8}},
      {"prop-2.8-convex",
       {"fat <= gapped dimension on convexified classes", check_prop_2_8_convex}},
      {"prop-2.9", {"log-gap class separation", check_prop_2_9}},
      {"prop-fat-equivalence",
       {"fixed-scale = fat dimension on convexified classes", check_fat_equivalence}},
      {"prop-3.9", {"single-point grid class separation", check_prop_3_9}},
      {"prop-d-less-f", {"sequential gapped <= sfat at alpha-2beta", check_prop_d_less_f}},
      {"prop-f-less-d", {"sfat at 3(alpha+beta) log-bounded by sequential gapped",
                         check_prop_f_less_d}},
      {"lemma-3.3", {"constructed sequential cover within g_M", check_lemma_3_3}},
      {"prop-3.5", {"discretized sequential cover lifts to alpha+beta", check_prop_3_5}},
      {"thm-2.10-const", {"block-design offset value >= (d-1)/50 - 4", check_thm_2_10_const}},
      {"thm-3.8-const", {"block-tree offset value >= d/50", check_thm_3_8_const}},
      {"lemma-2.11", {"transductive value >= offset complexity at C=2", check_lemma_2_11}},
      {"cor-2.12", {"transductive value chained through the block design", check_cor_2_12}},
      {"cor-3.10", {"online value chained through the block tree", check_cor_3_10}},
      {"constant-tree-reduction",
       {"constant-level trees recover the non-sequential notions", check_constant_tree_reduction}},
  };
  return registry;
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::string>> verify_list() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [id, entry] : detail::checker_registry()) out.push_back({id, entry.description});
  return out;
}

inline int verify_thread_cap() {
  if (const char* env = std::getenv("DIMLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs one registered checker; throws on unknown ids.
inline std::vector<VerdictReport> verify(const std::string& theorem_id) {
  const auto& registry = detail::checker_registry();
  auto it = registry.find(theorem_id);
  if (it == registry.end()) throw std::invalid_argument("unknown theorem id: " + theorem_id);
  const auto start = std::chrono::steady_clock::now();
  std::vector<VerdictReport> out;
  for (const auto& check : it->second.fn()) out.push_back(check.report());
  const auto elapsed = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - start);
  for (auto& r : out) r.runtime_ms = elapsed.count() / std::max<size_t>(out.size(), 1);
  std::sort(out.begin(), out.end(), [](const VerdictReport& a, const VerdictReport& b) {
    return a.instance_fingerprint < b.instance_fingerprint;
  });
  return out;
}

// Runs every registered checker, in parallel across checkers; the report is
// sorted by (theorem id, fingerprint) so assembly order does not matter.
inline std::vector<VerdictReport> verify_all(int threads = verify_thread_cap()) {
  std::vector<std::string> ids;
  for (const auto& [id, entry] : detail::checker_registry()) ids.push_back(id);
  std::vector<std::vector<VerdictReport>> results(ids.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= ids.size()) return;
      results[i] = verify(ids[i]);
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(ids.size())));
  for (int i = 0; i < n_threads - 1; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<VerdictReport> out;
  for (auto& batch : results)
    out.insert(out.end(), std::make_move_iterator(batch.begin()),
               std::make_move_iterator(batch.end()));
  std::sort(out.begin(), out.end(), [](const VerdictReport& a, const VerdictReport& b) {
    return std::tie(a.theorem_id, a.instance_fingerprint) <
           std::tie(b.theorem_id, b.instance_fingerprint);
  });
  return out;
}

inline Json report_to_json(const std::vector<VerdictReport>& reports) {
  Json j = Json::array();
  for (const auto& r : reports) j.push_back(to_json(r));
  return j;
}

}  // namespace dimlab
