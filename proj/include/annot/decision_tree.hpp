#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "annot/dataset.hpp"
#include "annot/errors.hpp"

namespace annot {

// ---------------------------------------------------------------------------
// Information measures (bits)
// ---------------------------------------------------------------------------

inline double entropy(const std::vector<std::size_t>& class_counts) {
  std::size_t total = 0;
  for (std::size_t c : class_counts) total += c;
  if (total == 0) throw EmptyDataset("entropy of an empty node");
  double h = 0.0;
  for (std::size_t c : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

inline double gain(const std::vector<std::size_t>& parent_counts,
                   const std::vector<std::vector<std::size_t>>& partition) {
  std::vector<std::size_t> sum(parent_counts.size(), 0);
  for (const auto& child : partition) {
    if (child.size() != parent_counts.size()) {
      throw PartitionMismatch("child count vector has wrong class count");
    }
    for (std::size_t i = 0; i < child.size(); ++i) sum[i] += child[i];
  }
  if (sum != parent_counts) {
    throw PartitionMismatch("partition does not sum to the parent counts");
  }
  std::size_t total = 0;
  for (std::size_t c : parent_counts) total += c;
  double g = entropy(parent_counts);
  for (const auto& child : partition) {
    std::size_t child_total = 0;
    for (std::size_t c : child) child_total += c;
    if (child_total == 0) continue;
    g -= (static_cast<double>(child_total) / total) * entropy(child);
  }
  return g < 0.0 ? 0.0 : g;  // clamp the odd -1e-16 from rounding
}

inline double split_info(const std::vector<std::size_t>& part_sizes) {
  std::size_t total = 0;
  for (std::size_t s : part_sizes) total += s;
  if (total == 0) throw EmptyDataset("split_info of an empty partition");
  double info = 0.0;
  for (std::size_t s : part_sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / total;
    info -= p * std::log2(p);
  }
  return info;
}

inline double gain_ratio(const std::vector<std::size_t>& parent_counts,
                         const std::vector<std::vector<std::size_t>>& partition) {
  std::vector<std::size_t> sizes;
  sizes.reserve(partition.size());
  for (const auto& child : partition) {
    std::size_t s = 0;
    for (std::size_t c : child) s += c;
    sizes.push_back(s);
  }
  const double info = split_info(sizes);
  if (info <= 0.0) throw ZeroSplitInfo("gain ratio undefined for a one-sided split");
  return gain(parent_counts, partition) / info;
}

// ---------------------------------------------------------------------------
// Tree
// ---------------------------------------------------------------------------

struct TreeNode {
  bool is_leaf = true;
  // leaf fields
  int label = 0;
  int support = 0;
  double purity = 1.0;  // majority fraction at the leaf
  // split fields
  int feature = -1;
  double threshold = 0.0;
  std::unique_ptr<TreeNode> below;           // samples with value < threshold
  std::unique_ptr<TreeNode> above_or_equal;  // samples with value >= threshold
};

struct C45Params {
  int min_samples = 2;  // below this the node becomes a leaf
  int max_depth = -1;   // -1 = unlimited
};

namespace detail {

struct SplitChoice {
  bool found = false;
  double ratio = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

/// Best binary midpoint split at a node by gain ratio, considering only
/// candidates with strictly positive gain. Ties prefer the lower feature
/// index, then the lower threshold (iteration order + strict improvement).
inline SplitChoice best_split(const LabeledDataset& data, const std::vector<int>& rows,
                              const std::vector<std::size_t>& node_counts) {
  SplitChoice best;
  const std::size_t d = data.dim();
  const std::size_t m = data.class_count();
  const std::size_t n = rows.size();

  std::vector<std::pair<double, int>> column(n);  // (value, label), sorted
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = {data.features[rows[i]][j], data.labels[rows[i]]};
    }
    std::sort(column.begin(), column.end());

    std::vector<std::size_t> left(m, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[column[i].second];
      if (column[i].first == column[i + 1].first) continue;
      const double threshold = (column[i].first + column[i + 1].first) / 2.0;
      std::vector<std::size_t> right(m);
      for (std::size_t c = 0; c < m; ++c) right[c] = node_counts[c] - left[c];
      const std::vector<std::vector<std::size_t>> partition = {left, right};
      if (gain(node_counts, partition) <= 0.0) continue;
      const double ratio = gain_ratio(node_counts, partition);
      if (!best.found || ratio > best.ratio) {
        best = {true, ratio, static_cast<int>(j), threshold};
      }
    }
  }
  return best;
}

inline std::unique_ptr<TreeNode> grow(const LabeledDataset& data, const std::vector<int>& rows,
                                      const C45Params& params, int depth) {
  const std::size_t m = data.class_count();
  std::vector<std::size_t> counts(m, 0);
  for (int r : rows) ++counts[data.labels[r]];

  auto make_leaf = [&] {
    auto leaf = std::make_unique<TreeNode>();
    std::size_t best = 0;
    for (std::size_t c = 1; c < m; ++c) {
      if (counts[c] > counts[best]) best = c;  // tie -> smallest index
    }
    leaf->label = static_cast<int>(best);
    leaf->support = static_cast<int>(rows.size());
    leaf->purity = static_cast<double>(counts[best]) / rows.size();
    return leaf;
  };

  std::size_t distinct = 0;
  for (std::size_t c : counts) distinct += (c > 0);
  if (distinct <= 1 || rows.size() < static_cast<std::size_t>(params.min_samples) ||
      (params.max_depth >= 0 && depth >= params.max_depth)) {
    return make_leaf();
  }

  const SplitChoice choice = best_split(data, rows, counts);
  if (!choice.found) return make_leaf();

  std::vector<int> lo, hi;
  for (int r : rows) {
    (data.features[r][choice.feature] < choice.threshold ? lo : hi).push_back(r);
  }
  auto node = std::make_unique<TreeNode>();
  node->is_leaf = false;
  node->feature = choice.feature;
  node->threshold = choice.threshold;
  node->support = static_cast<int>(rows.size());
  node->below = grow(data, lo, params, depth + 1);
  node->above_or_equal = grow(data, hi, params, depth + 1);
  return node;
}

}  // namespace detail

inline std::unique_ptr<TreeNode> fit_c45(const LabeledDataset& data, const C45Params& params = {}) {
  data.validate();
  std::vector<int> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  return detail::grow(data, rows, params, 0);
}

/// Leaf reached by descending value-vs-threshold comparisons.
inline const TreeNode& tree_leaf(const TreeNode& tree, const std::vector<double>& x) {
  const TreeNode* node = &tree;
  while (!node->is_leaf) {
    if (static_cast<std::size_t>(node->feature) >= x.size()) {
      throw DimensionMismatch("input has no feature " + std::to_string(node->feature));
    }
    node = x[node->feature] < node->threshold ? node->below.get()
                                              : node->above_or_equal.get();
  }
  return *node;
}

inline int tree_predict(const TreeNode& tree, const std::vector<double>& x) {
  return tree_leaf(tree, x).label;
}

}  // namespace annot
