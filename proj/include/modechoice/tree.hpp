#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "modechoice/dataset.hpp"

namespace modechoice {

// Non-owning row-major view used by the tree and forest code.
struct DataView {
  const double* values = nullptr;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;

  double at(std::size_t row, std::size_t col) const { return values[row * n_cols + col]; }
  std::span<const double> row(std::size_t r) const { return {values + r * n_cols, n_cols}; }

  static DataView of(const Dataset& data) {
    return {data.values().data(), data.n_rows(), data.n_features()};
  }
};

struct TreeParams {
  std::size_t min_leaf_size = 1;
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t mtry = 0;       // features sampled per node; 0 = all
  int n_classes = 2;
};

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;       // midpoint between two consecutive distinct values
  double gini_decrease = 0.0;   // per-row weighted decrease at the node
};

// Flat node storage; root is node 0. Internal nodes route value < threshold
// to `left`, else `right`. gini_decrease on internal nodes is the
// count-weighted decrease (node row count x per-row decrease) accumulated
// into MDG importance.
struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double gini_decrease = 0.0;
  std::vector<std::uint32_t> class_counts;  // leaves only

  bool is_leaf() const { return feature < 0; }
};

class Tree {
 public:
  Tree() = default;
  Tree(std::vector<TreeNode> nodes, int n_classes, std::size_t n_features)
      : nodes_(std::move(nodes)), n_classes_(n_classes), n_features_(n_features) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& nodes() { return nodes_; }
  int n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }
  bool empty() const { return nodes_.empty(); }

 private:
  std::vector<TreeNode> nodes_;
  int n_classes_ = 0;
  std::size_t n_features_ = 0;
};

// 1 - sum((count_i / total)^2). Throws std::invalid_argument when all counts
// are zero.
double gini_impurity(std::span<const std::uint32_t> class_counts);

// Exhausts every (feature in subset, midpoint threshold) pair and returns the
// candidate with the largest weighted Gini decrease, or nullopt when no split
// has a strictly positive decrease. Ties break to the lowest feature index,
// then the lowest threshold. Candidates leaving a child smaller than
// min_child_size are not considered.
std::optional<SplitCandidate> best_split(std::span<const std::size_t> rows,
                                         std::span<const std::size_t> feature_subset,
                                         DataView data, std::span<const int> labels,
                                         int n_classes, std::size_t min_child_size = 1);

// Recursive CART growth. At each node a fresh random subset of mtry features
// is drawn from `rng` (no draw when mtry equals the feature count). Recursion
// stops at max_depth, pure nodes, fewer than 2*min_leaf_size rows, or when no
// split has positive decrease.
Tree grow(DataView data, std::span<const int> labels, const TreeParams& params,
          std::mt19937_64& rng);

// Same, but growing from an explicit row multiset (bootstrap samples).
Tree grow(DataView data, std::span<const int> labels, std::span<const std::size_t> rows,
          const TreeParams& params, std::mt19937_64& rng);

// Routes the row to a leaf and returns the class with the highest count;
// ties break to the lowest class id. Throws std::invalid_argument when the
// row length does not match the training data.
int predict_one(const Tree& tree, std::span<const double> row);

// Per-feature sum of gini_decrease over the internal nodes splitting on it.
std::vector<double> tree_gini_decreases(const Tree& tree);

// Debugging dumps.
std::string dump_tree_text(const Tree& tree, const std::vector<std::string>& feature_names);
std::string dump_tree_json(const Tree& tree, const std::vector<std::string>& feature_names);

}  // namespace modechoice
