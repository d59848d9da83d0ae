#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "dimlab/cli.hpp"
#include "dimlab/verify.hpp"
#include "helpers.hpp"

using namespace dimlab;

namespace {


struct TempFile {
  std::string path;
  explicit TempFile(const std::string& p) : path(p) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("unknown theorem ids are rejected") {
  CHECK_THROWS_AS(verify("unknown-id"), std::invalid_argument);
}

TEST_CASE("every registered checker produces reports and passes") {
  // the fast checkers run here; the full sweep lives in the acceptance suite
  for (const std::string id : {"khintchine", "g-m-recurrence", "prop-2.9", "prop-3.9",
                               "covering-packing", "prop-2.7"}) {
    const auto reports = verify(id);
    INFO(id);
    CHECK_FALSE(reports.empty());
    for (const auto& r : reports) {
      INFO(r.instance_fingerprint << " lhs=" << r.lhs << " rhs=" << r.rhs);
      CHECK_FALSE(r.failed());
    }
  }
}

TEST_CASE("the checker registry covers every in-scope statement") {
  const auto listed = verify_list();
  const std::vector<std::string> expected = {
      "constant-tree-reduction", "cor-2.12",  "cor-3.10",  "covering-packing",
      "g-m-recurrence",          "khintchine", "lemma-2.11", "lemma-2.3",
      "lemma-3.3",               "prop-2.5",  "prop-2.7",  "prop-2.8",
      "prop-2.8-convex",         "prop-2.9",  "prop-3.5",  "prop-3.9",
      "prop-d-less-f",           "prop-f-less-d", "prop-fat-equivalence",
      "thm-2.10-const",          "thm-3.8-const"};
  REQUIRE(listed.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) CHECK(listed[i].first == expected[i]);
}

TEST_CASE("reports are deterministic and fingerprints reproducible") {
  const auto a = verify("prop-2.9");
  const auto b = verify("prop-2.9");
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].instance_fingerprint == b[i].instance_fingerprint);
    CHECK(a[i].verdict == b[i].verdict);
    CHECK(a[i].lhs == b[i].lhs);
  }
  // serialized form omits runtimes, so dumps compare equal
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());
}

TEST_CASE("cli reports usage errors as exit code 2") {
  CHECK(run_cli({"dims"}) == 2);                          // missing required options
  CHECK(run_cli({"verify"}) == 2);                        // no --all/--id/--list
  CHECK(run_cli({"verify", "--id", "nonexistent"}) == 2); // unknown id
  CHECK(run_cli({"nonsense"}) == 2);
}

TEST_CASE("cli runs dims end to end on files") {
  TempFile cls_file("harness_class.json");
  TempFile out_file("harness_result.json");
  write_json_file(cls_file.path,
                  to_json(testutil::integer_class(2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}})));
  CHECK(run_cli({"dims", "--kind", "gapped-integer", "--alpha", "1", "--in", cls_file.path,
                 "--out", out_file.path}) == 0);
  const Json result = read_json_file(out_file.path);
  CHECK(result.at("dim") == 2);
  CHECK(result.at("certificate").at("realizers").size() == 4);

  // malformed input: exit 2 and no partial output
  TempFile bad_file("harness_bad.json");
  {
    std::ofstream bad(bad_file.path);
    bad << "{ not json";
  }
  TempFile never_file("harness_never.json");
  CHECK(run_cli({"dims", "--kind", "fat", "--alpha", "1/2", "--in", bad_file.path, "--out",
                 never_file.path}) == 2);
  CHECK_FALSE(std::ifstream(never_file.path).good());
}

TEST_CASE("cli verify emits a report and a zero exit code") {
  TempFile report("harness_report.json");
  CHECK(run_cli({"verify", "--id", "khintchine", "--out", report.path}) == 0);
  const Json j = read_json_file(report.path);
  REQUIRE(j.is_array());
  CHECK(j.size() == 30);
  for (const auto& entry : j) {
    CHECK(entry.at("theorem_id") == "khintchine");
    CHECK(entry.at("verdict") == "pass");
    CHECK_FALSE(entry.contains("runtime_ms"));
  }
}

TEST_CASE("cli list enumerates checkers one per line") {
  CHECK(run_cli({"verify", "--list"}) == 0);
}

TEST_CASE("cli construct and game round-trip") {
  TempFile cls_file("harness_lg.json");
  CHECK(run_cli({"construct", "--recipe", "log-gap", "--alpha", "1/4", "--q", "4", "--out",
                 cls_file.path}) == 0);
  const auto cls = function_class_from_json(read_json_file(cls_file.path));
  CHECK(cls.n_functions() == 4);

  CHECK(run_cli({"game", "--mode", "transductive", "--in", cls_file.path, "--horizon", "1",
                 "--design", "0"}) == 0);
  CHECK(run_cli({"rademacher", "--mode", "exact", "--in", cls_file.path, "--design", "0,1",
                 "--mu", "0,0", "--c", "2"}) == 0);
}
