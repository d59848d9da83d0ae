#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dimlab/constructions.hpp"
#include "dimlab/games.hpp"
#include "dimlab/io.hpp"
#include "dimlab/nonseq_cover.hpp"
#include "dimlab/nonseq_dims.hpp"
#include "dimlab/rademacher.hpp"
#include "dimlab/sequential.hpp"
#include "dimlab/verify.hpp"

namespace dimlab {
namespace cli {

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

inline std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

inline Metric load_metric(const FunctionClass& cls, const std::string& path) {
  if (path.empty()) return Metric::absolute_difference();
  const Json j = read_json_file(path);
  std::vector<std::vector<Rational>> table;
  for (const auto& row : j.at("table")) {
    std::vector<Rational> r;
    for (const auto& cell : row) r.push_back(parse_rational(cell.get<std::string>()));
    table.push_back(std::move(r));
  }
  return Metric::tabulated(cls.grid(), table);
}

inline Json certificate_json(const ShatterCertificate& cert) {
  Json j;
  j["points"] = cert.points.indices;
  Json ws = Json::array();
  for (const auto& s : cert.witnesses) ws.push_back({to_string(s.lo), to_string(s.hi)});
  j["witnesses"] = std::move(ws);
  j["realizers"] = cert.realizers;
  return j;
}

inline Json certificate_json(const TreeShatterCertificate& cert) {
  Json j;
  j["x_tree"] = to_json(cert.x_tree);
  j["witness_tree"] = to_json(cert.witness_tree);
  j["realizers"] = cert.realizers;
  return j;
}

inline void emit(const Json& result, const std::string& out_path) {
  if (!out_path.empty())
    write_json_file(out_path, result);
  else
    std::cout << result.dump(2) << "\n";
}

struct DimsArgs {
  std::string kind, in, out, metric;
  std::string alpha = "1", beta;
};

inline int run_dims(const DimsArgs& a) {
  const auto cls = function_class_from_json(read_json_file(a.in));
  const auto metric = load_metric(cls, a.metric);
  const Rational alpha = parse_rational(a.alpha);
  Json result;
  result["kind"] = a.kind;
  result["alpha"] = to_string(alpha);
  DimResult r;
  if (a.kind == "gapped-integer") {
    r = gapped_dim_integer(cls, metric, alpha);
  } else if (a.kind == "gapped-real") {
    if (a.beta.empty()) throw std::invalid_argument("gapped-real needs --beta");
    result["beta"] = a.beta;
    r = gapped_dim_real(cls, metric, alpha, parse_rational(a.beta));
  } else if (a.kind == "fat") {
    r = fat_dim(cls, alpha);
  } else if (a.kind == "fixed") {
    r = fixed_scale_dim(cls, alpha);
  } else {
    throw std::invalid_argument("unknown dims kind: " + a.kind);
  }
  result["dim"] = r.dim;
  result["certificate"] = certificate_json(r.certificate);
  std::cout << "dim = " << r.dim << "\n";
  emit(result, a.out);
  return 0;
}

struct CoverArgs {
  std::string mode = "exact", in, out, metric, design;
  std::string alpha = "1";
};

inline int run_cover(const CoverArgs& a) {
  const auto cls = function_class_from_json(read_json_file(a.in));
  const auto metric = load_metric(cls, a.metric);
  const Rational alpha = parse_rational(a.alpha);
  SampleDesign design;
  if (a.design.empty())
    for (int x = 0; x < cls.n_points(); ++x) design.indices.push_back(x);
  else
    design.indices = parse_int_list(a.design);

  Json result;
  result["mode"] = a.mode;
  result["alpha"] = to_string(alpha);
  result["design"] = design.indices;
  if (a.mode == "packing") {
    const auto r = packing_max_exact(cls, design, metric, alpha);
    result["size"] = r.size;
    result["subset"] = r.subset;
    std::cout << "packing = " << r.size << "\n";
  } else {
    const auto r = a.mode == "exact" ? cover_min_exact(cls, design, metric, alpha)
                                     : cover_greedy(cls, design, metric, alpha);
    if (a.mode != "exact" && a.mode != "greedy")
      throw std::invalid_argument("unknown cover mode: " + a.mode);
    result["size"] = r.size.str();
    result["centers"] = r.cover.centers;
    result["assignment"] = r.cover.assignment;
    std::cout << "cover = " << r.size << "\n";
  }
  emit(result, a.out);
  return 0;
}

struct SeqArgs {
  std::string kind, in, out, metric, tree;
  std::string alpha = "1", beta;
};

inline int run_seq(const SeqArgs& a) {
  const auto cls = function_class_from_json(read_json_file(a.in));
  const auto metric = load_metric(cls, a.metric);
  const Rational alpha = parse_rational(a.alpha);
  Json result;
  result["kind"] = a.kind;
  result["alpha"] = to_string(alpha);
  if (a.kind == "cover-construct" || a.kind == "cover-min") {
    if (a.tree.empty()) throw std::invalid_argument(a.kind + " needs --tree");
    const auto x_tree = tree_from_json<int>(read_json_file(a.tree));
    if (a.kind == "cover-construct") {
      const auto cover = seq_cover_construct(cls, metric, x_tree, alpha);
      result["size"] = cover.trees.size();
      Json trees = Json::array();
      for (const auto& t : cover.trees) trees.push_back(to_json(t));
      result["trees"] = std::move(trees);
      std::cout << "cover = " << cover.trees.size() << "\n";
    } else {
      const BigInt n = seq_cover_min_bruteforce(cls, metric, x_tree, alpha);
      result["size"] = n.str();
      std::cout << "cover = " << n << "\n";
    }
  } else {
    SeqDimResult r;
    if (a.kind == "gapped-integer") {
      r = seq_gapped_dim_integer(cls, metric, alpha);
    } else if (a.kind == "gapped-real") {
      if (a.beta.empty()) throw std::invalid_argument("gapped-real needs --beta");
      result["beta"] = a.beta;
      r = seq_gapped_dim_real(cls, metric, alpha, parse_rational(a.beta));
    } else if (a.kind == "sfat") {
      r = sfat_dim(cls, alpha);
    } else {
      throw std::invalid_argument("unknown seq kind: " + a.kind);
    }
    result["dim"] = r.dim;
    result["certificate"] = certificate_json(r.certificate);
    std::cout << "dim = " << r.dim << "\n";
  }
  emit(result, a.out);
  return 0;
}

struct RademacherArgs {
  std::string mode = "exact", in, out, design, mu, x_tree, mu_tree;
  std::string c = "2";
  uint64_t samples = 1000;
  uint64_t seed = 0;
  bool exhaustive = false;
};

inline int run_rademacher(const RademacherArgs& a) {
  const auto cls = function_class_from_json(read_json_file(a.in));
  std::optional<OffsetInstance> inst;
  if (!a.x_tree.empty() || !a.mu_tree.empty()) {
    if (a.x_tree.empty() || a.mu_tree.empty())
      throw std::invalid_argument("tree instances need both --x-tree and --mu-tree");
    inst = OffsetInstance::seq(cls, tree_from_json<int>(read_json_file(a.x_tree)),
                               tree_from_json<Rational>(read_json_file(a.mu_tree)),
                               parse_rational(a.c));
  } else {
    if (a.design.empty() || a.mu.empty())
      throw std::invalid_argument("design instances need --design and --mu");
    inst = OffsetInstance::nonseq(cls, SampleDesign{parse_int_list(a.design)},
                                  parse_rational_list(a.mu), parse_rational(a.c));
  }
  Json result;
  result["mode"] = a.mode;
  result["C"] = to_string(parse_rational(a.c));
  if (a.mode == "exact") {
    const Rational v =
        inst->sequential() ? offset_rad_seq_exact(*inst) : offset_rad_nonseq_exact(*inst);
    result["value"] = to_string(v);
    std::cout << "offset = " << to_string(v) << "\n";
  } else if (a.mode == "mc") {
    const auto r = offset_rad_mc(*inst, a.samples, a.seed, a.exhaustive);
    result["mean"] = to_string(r.mean);
    result["estimate"] = r.estimate;
    result["std_error"] = r.std_error;
    result["samples"] = r.samples;
    result["seed"] = a.seed;
    result["exhaustive"] = a.exhaustive;
    std::cout << "offset ~ " << r.estimate << " +- " << r.std_error << "\n";
  } else {
    throw std::invalid_argument("unknown rademacher mode: " + a.mode);
  }
  emit(result, a.out);
  return 0;
}

struct GameArgs {
  std::string mode = "transductive", in, out, design, contexts, y_grid, yhat_grid;
  int horizon = 1;
};

inline int run_game(const GameArgs& a) {
  const auto cls = function_class_from_json(read_json_file(a.in));
  GameConfig cfg{cls,          a.horizon, GameConfig::default_grid(), GameConfig::default_grid(),
                 std::nullopt, {}};
  if (!a.y_grid.empty()) cfg.y_grid = parse_rational_list(a.y_grid);
  if (!a.yhat_grid.empty()) cfg.yhat_grid = parse_rational_list(a.yhat_grid);
  Rational value;
  if (a.mode == "transductive") {
    if (a.design.empty()) throw std::invalid_argument("transductive games need --design");
    cfg.design = SampleDesign{parse_int_list(a.design)};
    value = minimax_transductive(cfg);
  } else if (a.mode == "online") {
    if (a.contexts.empty())
      for (int x = 0; x < cls.n_points(); ++x) cfg.context_grid.push_back(x);
    else
      cfg.context_grid = parse_int_list(a.contexts);
    value = minimax_online_seq(cfg);
  } else {
    throw std::invalid_argument("unknown game mode: " + a.mode);
  }
  Json result;
  result["mode"] = a.mode;
  result["horizon"] = a.horizon;
  result["value"] = to_string(value);
  std::cout << "value = " << to_string(value) << "\n";
  emit(result, a.out);
  return 0;
}

struct ConstructArgs {
  std::string recipe, out, in, grid, intervals, recipe_file;
  std::string alpha = "1/4", step = "1/4";
  int64_t q = 4, resolution = 2;
  int n_functions = 5, n_points = 2;
  uint64_t seed = 0;
};

// Recipes can also arrive as a JSON config file mirroring the flags:
// { "kind": "...", "alpha": "1/4", "q": 4, ... }
inline ConstructArgs load_recipe_file(const std::string& path) {
  const Json j = read_json_file(path);
  ConstructArgs a;
  a.recipe = j.at("kind").get<std::string>();
  if (j.contains("alpha")) a.alpha = j.at("alpha").get<std::string>();
  if (j.contains("step")) a.step = j.at("step").get<std::string>();
  if (j.contains("q")) a.q = j.at("q").get<int64_t>();
  if (j.contains("intervals")) a.intervals = j.at("intervals").get<std::string>();
  if (j.contains("grid")) a.grid = j.at("grid").get<std::string>();
  if (j.contains("n_functions")) a.n_functions = j.at("n_functions").get<int>();
  if (j.contains("n_points")) a.n_points = j.at("n_points").get<int>();
  if (j.contains("seed")) a.seed = j.at("seed").get<uint64_t>();
  if (j.contains("resolution")) a.resolution = j.at("resolution").get<int64_t>();
  if (j.contains("in")) a.in = j.at("in").get<std::string>();
  return a;
}

inline ValueGrid parse_grid_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("grid spec must be kind:size");
  const std::string kind = spec.substr(0, colon);
  const int64_t size = std::stoll(spec.substr(colon + 1));
  if (kind == "integer") return ValueGrid::integer_alphabet(size);
  if (kind == "real") return ValueGrid::real_grid(size);
  throw std::invalid_argument("unknown grid kind: " + kind);
}

inline int run_construct(const ConstructArgs& args) {
  ConstructArgs a = args;
  if (!a.recipe_file.empty()) {
    const std::string out = a.out;
    a = load_recipe_file(a.recipe_file);
    a.out = out;
  }
  std::optional<FunctionClass> cls;
  if (a.recipe == "log-gap") {
    cls = log_gap_class_nonseq(parse_rational(a.alpha), a.q);
  } else if (a.recipe == "single-point") {
    cls = single_point_grid_class(parse_rational(a.step));
  } else if (a.recipe == "interval-product") {
    std::vector<GridInterval> ivs;
    std::stringstream ss(a.intervals);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("intervals must be lo:hi,...");
      ivs.push_back({std::stoll(item.substr(0, colon)), std::stoll(item.substr(colon + 1))});
    }
    cls = interval_product_class(ivs, a.q);
  } else if (a.recipe == "full") {
    const auto grid = a.grid.empty() ? ValueGrid::real_grid(a.q) : parse_grid_spec(a.grid);
    std::vector<GridInterval> ivs(static_cast<size_t>(a.n_points),
                                  GridInterval{grid.numerator_at(0),
                                               grid.numerator_at(grid.alphabet_size() - 1)});
    if (grid.is_integer()) {
      // integer grids are not interval products; enumerate directly
      std::vector<std::vector<int64_t>> rows;
      std::vector<int64_t> cur(static_cast<size_t>(a.n_points), 1);
      for (;;) {
        rows.push_back(cur);
        if (rows.size() > kMaxGeneratedFunctions)
          throw std::invalid_argument("full class too large");
        int i = a.n_points - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == grid.m) cur[static_cast<size_t>(i--)] = 1;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
      }
      std::vector<std::string> labels;
      for (int i = 1; i <= a.n_points; ++i) labels.push_back("x" + std::to_string(i));
      cls = FunctionClass(labels, grid, rows);
    } else {
      cls = interval_product_class(ivs, grid.q);
    }
  } else if (a.recipe == "random") {
    const auto grid = a.grid.empty() ? ValueGrid::real_grid(a.q) : parse_grid_spec(a.grid);
    cls = random_class(a.n_functions, a.n_points, grid, a.seed);
  } else if (a.recipe == "convexify") {
    if (a.in.empty()) throw std::invalid_argument("convexify needs --in");
    cls = convexify(function_class_from_json(read_json_file(a.in)), a.resolution);
  } else {
    throw std::invalid_argument("unknown recipe: " + a.recipe);
  }
  std::cout << "functions = " << cls->n_functions() << ", points = " << cls->n_points() << "\n";
  emit(to_json(*cls), a.out);
  return 0;
}

struct VerifyArgs {
  bool all = false;
  bool list = false;
  std::string id, out;
  int threads = 0;
};

inline int run_verify(const VerifyArgs& a) {
  if (a.list) {
    for (const auto& [id, desc] : verify_list()) std::cout << id << "  " << desc << "\n";
    return 0;
  }
  std::vector<VerdictReport> reports;
  if (a.all)
    reports = a.threads > 0 ? verify_all(a.threads) : verify_all();
  else if (!a.id.empty())
    reports = verify(a.id);
  else
    throw std::invalid_argument("verify needs --all, --id or --list");

  size_t failures = 0, skipped = 0;
  for (const auto& r : reports) {
    if (r.failed()) ++failures;
    if (r.verdict.rfind("skipped", 0) == 0) ++skipped;
    std::cout << (r.failed() ? "[FAIL] " : (r.verdict == "pass" ? "[PASS] " : "[SKIP] "))
              << r.theorem_id << " " << r.instance_fingerprint << "  lhs=" << r.lhs
              << "  rhs=" << r.rhs << "  (" << r.runtime_ms << " ms)\n";
  }
  std::cout << reports.size() << " checks, " << failures << " failures, " << skipped
            << " skipped\n";
  if (!a.out.empty()) write_json_file(a.out, report_to_json(reports));
  return failures == 0 ? 0 : 1;
}

}  // namespace cli

// Entry point shared by the binary and the in-process tests. Returns 0 on
// success, 1 when a verify run reports failures, 2 on usage or input errors.
inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"exact calculators for gapped dimensions, covers, offset complexities and "
               "minimax regression values on finite function classes"};
  app.require_subcommand(1);

  cli::DimsArgs dims;
  auto* dims_cmd = app.add_subcommand("dims", "non-sequential dimensions");
  dims_cmd->add_option("--kind", dims.kind, "gapped-integer|gapped-real|fat|fixed")->required();
  dims_cmd->add_option("--alpha", dims.alpha, "scale, as p/q");
  dims_cmd->add_option("--beta", dims.beta, "closeness scale for gapped-real");
  dims_cmd->add_option("--in", dims.in, "function class file")->required();
  dims_cmd->add_option("--metric", dims.metric, "tabulated metric file");
  dims_cmd->add_option("--out", dims.out, "result file");

  cli::CoverArgs cover;
  auto* cover_cmd = app.add_subcommand("cover", "covering and packing numbers");
  cover_cmd->add_option("--mode", cover.mode, "exact|greedy|packing");
  cover_cmd->add_option("--alpha", cover.alpha, "scale");
  cover_cmd->add_option("--in", cover.in, "function class file")->required();
  cover_cmd->add_option("--design", cover.design, "comma-separated point indices");
  cover_cmd->add_option("--metric", cover.metric, "tabulated metric file");
  cover_cmd->add_option("--out", cover.out, "result file");

  cli::SeqArgs seq;
  auto* seq_cmd = app.add_subcommand("seq", "sequential dimensions and covers");
  seq_cmd->add_option("--kind", seq.kind,
                      "gapped-integer|gapped-real|sfat|cover-construct|cover-min")
      ->required();
  seq_cmd->add_option("--alpha", seq.alpha, "scale");
  seq_cmd->add_option("--beta", seq.beta, "closeness scale for gapped-real");
  seq_cmd->add_option("--in", seq.in, "function class file")->required();
  seq_cmd->add_option("--tree", seq.tree, "X-valued tree file (cover kinds)");
  seq_cmd->add_option("--metric", seq.metric, "tabulated metric file");
  seq_cmd->add_option("--out", seq.out, "result file");

  cli::RademacherArgs rad;
  auto* rad_cmd = app.add_subcommand("rademacher", "offset Rademacher complexities");
  rad_cmd->add_option("--mode", rad.mode, "exact|mc");
  rad_cmd->add_option("--in", rad.in, "function class file")->required();
  rad_cmd->add_option("--design", rad.design, "point indices (design instances)");
  rad_cmd->add_option("--mu", rad.mu, "comma-separated rationals");
  rad_cmd->add_option("--x-tree", rad.x_tree, "X-valued tree file (tree instances)");
  rad_cmd->add_option("--mu-tree", rad.mu_tree, "rational tree file");
  rad_cmd->add_option("--c", rad.c, "offset constant C");
  rad_cmd->add_option("--samples", rad.samples, "Monte Carlo sample count");
  rad_cmd->add_option("--seed", rad.seed, "Monte Carlo seed");
  rad_cmd->add_flag("--exhaustive", rad.exhaustive, "enumerate all paths instead of sampling");
  rad_cmd->add_option("--out", rad.out, "result file");

  cli::GameArgs game;
  auto* game_cmd = app.add_subcommand("game", "minimax regression values");
  game_cmd->add_option("--mode", game.mode, "transductive|online");
  game_cmd->add_option("--in", game.in, "function class file")->required();
  game_cmd->add_option("--horizon", game.horizon, "number of rounds");
  game_cmd->add_option("--design", game.design, "context order (transductive)");
  game_cmd->add_option("--contexts", game.contexts, "context pool (online)");
  game_cmd->add_option("--y-grid", game.y_grid, "adversary action grid");
  game_cmd->add_option("--yhat-grid", game.yhat_grid, "learner action grid");
  game_cmd->add_option("--out", game.out, "result file");

  cli::ConstructArgs cons;
  auto* cons_cmd = app.add_subcommand("construct", "class generators");
  cons_cmd->add_option("--recipe", cons.recipe,
                       "log-gap|single-point|interval-product|full|random|convexify");
  cons_cmd->add_option("--recipe-file", cons.recipe_file, "JSON recipe config file");
  cons_cmd->add_option("--alpha", cons.alpha, "log-gap scale (1/2^m)");
  cons_cmd->add_option("--step", cons.step, "single-point grid step (1/Q)");
  cons_cmd->add_option("--q", cons.q, "grid denominator");
  cons_cmd->add_option("--intervals", cons.intervals, "lo:hi,lo:hi numerators");
  cons_cmd->add_option("--grid", cons.grid, "integer:M or real:Q");
  cons_cmd->add_option("--n-functions", cons.n_functions, "random row count");
  cons_cmd->add_option("--n-points", cons.n_points, "domain size");
  cons_cmd->add_option("--seed", cons.seed, "random seed");
  cons_cmd->add_option("--resolution", cons.resolution, "convexify weight denominator");
  cons_cmd->add_option("--in", cons.in, "input class (convexify)");
  cons_cmd->add_option("--out", cons.out, "output class file");

  cli::VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "theorem checkers");
  ver_cmd->add_flag("--all", ver.all, "run every registered checker");
  ver_cmd->add_flag("--list", ver.list, "list registered theorem ids");
  ver_cmd->add_option("--id", ver.id, "run one checker");
  ver_cmd->add_option("--out", ver.out, "report file");
  ver_cmd->add_option("--threads", ver.threads, "thread cap (overrides DIMLAB_THREADS)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dims_cmd->parsed()) return cli::run_dims(dims);
    if (cover_cmd->parsed()) return cli::run_cover(cover);
    if (seq_cmd->parsed()) return cli::run_seq(seq);
    if (rad_cmd->parsed()) return cli::run_rademacher(rad);
    if (game_cmd->parsed()) return cli::run_game(game);
    if (cons_cmd->parsed()) return cli::run_construct(cons);
    if (ver_cmd->parsed()) return cli::run_verify(ver);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace dimlab
