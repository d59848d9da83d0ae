#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dimlab/core.hpp"

namespace dimlab {

// Complete binary tree of depth d stored as a flat heap-ordered array of
// 2^d - 1 labels. The node reached at level t (1-based) along sign path
// eps has heap index 2^(t-1) + sum_{i<t} (eps_i+1)/2 * 2^(t-1-i), i.e. the
// usual 1-based heap with left = 2k, right = 2k+1. A label at level t
// depends only on eps_{1:t-1}.
template <typename Label>
class LabeledTree {
 public:
  LabeledTree() : depth_(0) {}

  LabeledTree(int depth, std::vector<Label> labels) : depth_(depth), labels_(std::move(labels)) {
    if (depth < 0 || depth > 30) throw std::invalid_argument("tree depth out of range");
    if (labels_.size() != node_count(depth)) throw std::invalid_argument("label count != 2^d - 1");
  }

  static size_t node_count(int depth) { return (size_t{1} << depth) - 1; }

  // Tree with the same label at every node of a level.
  static LabeledTree constant_levels(const std::vector<Label>& per_level) {
    const int d = static_cast<int>(per_level.size());
    std::vector<Label> labels(node_count(d));
    size_t pos = 0;
    for (int t = 1; t <= d; ++t)
      for (size_t i = 0; i < (size_t{1} << (t - 1)); ++i)
        labels[pos++] = per_level[static_cast<size_t>(t - 1)];
    return LabeledTree(d, std::move(labels));
  }

  int depth() const { return depth_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::vector<Label>& labels() { return labels_; }

  // 1-based heap index of the level-t node on `path`.
  size_t heap_index(const Path& path, int t) const {
    check_level(t);
    if (path.size() < static_cast<size_t>(t - 1)) throw std::invalid_argument("path too short");
    size_t idx = 1;
    for (int i = 0; i < t - 1; ++i) idx = 2 * idx + (path[static_cast<size_t>(i)] > 0 ? 1 : 0);
    return idx;
  }

  const Label& at(const Path& path, int t) const { return labels_[heap_index(path, t) - 1]; }

  const Label& at_node(size_t heap_idx) const {
    if (heap_idx < 1 || heap_idx > labels_.size()) throw std::out_of_range("node out of range");
    return labels_[heap_idx - 1];
  }

  Label& at_node(size_t heap_idx) {
    if (heap_idx < 1 || heap_idx > labels_.size()) throw std::out_of_range("node out of range");
    return labels_[heap_idx - 1];
  }

  bool is_constant_level(int t) const {
    check_level(t);
    const size_t begin = size_t{1} << (t - 1);
    for (size_t i = begin; i < 2 * begin; ++i)
      if (!(labels_[i - 1] == labels_[begin - 1])) return false;
    return true;
  }

  bool is_constant() const {
    for (int t = 1; t <= depth_; ++t)
      if (!is_constant_level(t)) return false;
    return true;
  }

  // Subtree rooted at the level-2 child (sign < 0 for left).
  LabeledTree child(int sign) const {
    if (depth_ == 0) throw std::invalid_argument("depth-0 tree has no children");
    std::vector<Label> labels(node_count(depth_ - 1));
    size_t pos = 0;
    for (int t = 2; t <= depth_; ++t) {
      const size_t level_begin = size_t{1} << (t - 1);
      const size_t half = level_begin / 2;
      const size_t offset = sign > 0 ? half : 0;
      for (size_t i = 0; i < half; ++i) labels[pos++] = labels_[level_begin + offset + i - 1];
    }
    return LabeledTree(depth_ - 1, std::move(labels));
  }

  // Root label + two depth-(d-1) subtrees -> depth-d tree.
  static LabeledTree join(const Label& root, const LabeledTree& left, const LabeledTree& right) {
    if (left.depth() != right.depth()) throw std::invalid_argument("join needs equal depths");
    const int d = left.depth() + 1;
    std::vector<Label> labels(node_count(d));
    labels[0] = root;
    size_t pos = 1;
    size_t child_pos = 0;
    for (int t = 2; t <= d; ++t) {
      const size_t half = size_t{1} << (t - 2);
      for (size_t i = 0; i < half; ++i) labels[pos + i] = left.labels()[child_pos + i];
      for (size_t i = 0; i < half; ++i) labels[pos + half + i] = right.labels()[child_pos + i];
      pos += 2 * half;
      child_pos += half;
    }
    return LabeledTree(d, std::move(labels));
  }

  // Truncate to the top `new_depth` levels.
  LabeledTree truncated(int new_depth) const {
    if (new_depth > depth_) throw std::invalid_argument("cannot truncate upward");
    std::vector<Label> labels(labels_.begin(),
                              labels_.begin() + static_cast<long>(node_count(new_depth)));
    return LabeledTree(new_depth, std::move(labels));
  }

  bool operator==(const LabeledTree&) const = default;

 private:
  void check_level(int t) const {
    if (t < 1 || t > depth_) throw std::out_of_range("tree level out of range");
  }

  int depth_;
  std::vector<Label> labels_;
};

template <typename Label>
const Label& tree_label_at(const LabeledTree<Label>& tree, const Path& path, int t) {
  return tree.at(path, t);
}

}  // namespace dimlab
