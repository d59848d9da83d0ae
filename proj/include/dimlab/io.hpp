#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

#include "dimlab/core.hpp"
#include "dimlab/tree.hpp"

namespace dimlab {

using Json = nlohmann::ordered_json;

// FunctionClass file format:
// { "Q": int, "alphabet": "integer"|"real_grid", "M": int?, "domain": [...],
//   "values": [[numerators]] }
inline Json to_json(const FunctionClass& cls) {
  Json j;
  j["Q"] = cls.grid().q;
  j["alphabet"] = cls.grid().is_integer() ? "integer" : "real_grid";
  if (cls.grid().is_integer()) j["M"] = cls.grid().m;
  j["domain"] = cls.domain_labels();
  j["values"] = cls.rows();
  return j;
}

inline FunctionClass function_class_from_json(const Json& j) {
  const std::string alphabet = j.at("alphabet").get<std::string>();
  ValueGrid grid;
  if (alphabet == "integer") {
    grid = ValueGrid::integer_alphabet(j.at("M").get<int64_t>());
    if (j.at("Q").get<int64_t>() != 1) throw std::invalid_argument("integer alphabet needs Q = 1");
  } else if (alphabet == "real_grid") {
    grid = ValueGrid::real_grid(j.at("Q").get<int64_t>());
  } else {
    throw std::invalid_argument("unknown alphabet kind: " + alphabet);
  }
  return FunctionClass(j.at("domain").get<std::vector<std::string>>(), grid,
                       j.at("values").get<std::vector<std::vector<int64_t>>>());
}

// Tree file format: { "depth": d, "label_kind": str, "labels": [...] }
// in heap order. Rationals are serialized as "p/q" strings.
inline Json label_to_json(int64_t v) { return v; }
inline Json label_to_json(int v) { return v; }
inline Json label_to_json(const Rational& v) { return to_string(v); }
inline Json label_to_json(const WitnessPair& v) {
  return Json::array({to_string(v.lo), to_string(v.hi)});
}

inline const char* label_kind_name(const int64_t*) { return "grid_value"; }
inline const char* label_kind_name(const int*) { return "domain_point"; }
inline const char* label_kind_name(const Rational*) { return "rational"; }
inline const char* label_kind_name(const WitnessPair*) { return "witness_pair"; }

template <typename Label>
Json to_json(const LabeledTree<Label>& tree) {
  Json j;
  j["depth"] = tree.depth();
  j["label_kind"] = label_kind_name(static_cast<const Label*>(nullptr));
  Json labels = Json::array();
  for (const auto& l : tree.labels()) labels.push_back(label_to_json(l));
  j["labels"] = std::move(labels);
  return j;
}

inline void label_from_json(const Json& j, int64_t& out) { out = j.get<int64_t>(); }
inline void label_from_json(const Json& j, int& out) { out = j.get<int>(); }
inline void label_from_json(const Json& j, Rational& out) {
  out = parse_rational(j.get<std::string>());
}
inline void label_from_json(const Json& j, WitnessPair& out) {
  out.lo = parse_rational(j.at(0).get<std::string>());
  out.hi = parse_rational(j.at(1).get<std::string>());
}

template <typename Label>
LabeledTree<Label> tree_from_json(const Json& j) {
  const std::string kind = j.at("label_kind").get<std::string>();
  if (kind != label_kind_name(static_cast<const Label*>(nullptr)))
    throw std::invalid_argument("tree label kind mismatch: got " + kind);
  const int depth = j.at("depth").get<int>();
  std::vector<Label> labels;
  for (const auto& item : j.at("labels")) {
    Label l;
    label_from_json(item, l);
    labels.push_back(std::move(l));
  }
  return LabeledTree<Label>(depth, std::move(labels));
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dimlab
