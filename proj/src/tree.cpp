#include "modechoice/tree.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace modechoice {

namespace {

double gini_from_counts(const std::uint32_t* counts, int n_classes, double total) {
  double sum_sq = 0.0;
  for (int k = 0; k < n_classes; ++k) {
    const double p = counts[k] / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

// Per-tree growth state; scratch buffers are reused across nodes.
struct GrowContext {
  DataView data;
  std::span<const int> labels;
  TreeParams params;
  std::mt19937_64* rng = nullptr;
  std::vector<TreeNode>* nodes = nullptr;

  std::vector<std::size_t> feature_perm;   // permutation buffer for mtry sampling
  std::vector<std::size_t> feature_pick;   // sorted chosen subset
  std::vector<std::uint32_t> count_buf;
};

std::uint32_t count_classes(const GrowContext& ctx, std::span<const std::size_t> rows,
                            std::vector<std::uint32_t>& counts) {
  counts.assign(ctx.params.n_classes, 0);
  for (std::size_t r : rows) ++counts[ctx.labels[r]];
  std::uint32_t max_count = 0;
  for (auto c : counts) max_count = std::max(max_count, c);
  return max_count;
}

std::int32_t build_node(GrowContext& ctx, std::span<std::size_t> rows, std::size_t depth) {
  std::vector<std::uint32_t> counts;
  const std::uint32_t max_count = count_classes(ctx, rows, counts);
  const bool pure = max_count == rows.size();

  const bool depth_capped = ctx.params.max_depth != 0 && depth >= ctx.params.max_depth;
  std::optional<SplitCandidate> split;
  if (!pure && !depth_capped && rows.size() >= 2 * ctx.params.min_leaf_size) {
    const std::size_t p = ctx.data.n_cols;
    const std::size_t mtry = ctx.params.mtry == 0 ? p : ctx.params.mtry;
    std::span<const std::size_t> subset;
    if (mtry >= p) {
      ctx.feature_pick.resize(p);
      std::iota(ctx.feature_pick.begin(), ctx.feature_pick.end(), std::size_t{0});
      subset = ctx.feature_pick;
    } else {
      // Partial Fisher-Yates over a persistent permutation buffer; any start
      // state yields a uniform subset.
      auto& perm = ctx.feature_perm;
      for (std::size_t i = 0; i < mtry; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, p - 1);
        std::swap(perm[i], perm[pick(*ctx.rng)]);
      }
      ctx.feature_pick.assign(perm.begin(), perm.begin() + mtry);
      std::sort(ctx.feature_pick.begin(), ctx.feature_pick.end());
      subset = ctx.feature_pick;
    }
    split = best_split(rows, subset, ctx.data, ctx.labels, ctx.params.n_classes,
                       ctx.params.min_leaf_size);
  }

  if (!split) {
    TreeNode leaf;
    leaf.class_counts = std::move(counts);
    ctx.nodes->push_back(std::move(leaf));
    return static_cast<std::int32_t>(ctx.nodes->size() - 1);
  }

  const std::size_t f = split->feature;
  const double thr = split->threshold;
  auto mid_it = std::partition(rows.begin(), rows.end(),
                               [&](std::size_t r) { return ctx.data.at(r, f) < thr; });
  const std::size_t n_left = static_cast<std::size_t>(mid_it - rows.begin());

  ctx.nodes->emplace_back();
  const std::int32_t self = static_cast<std::int32_t>(ctx.nodes->size() - 1);
  {
    TreeNode& node = (*ctx.nodes)[self];
    node.feature = static_cast<std::int32_t>(f);
    node.threshold = thr;
    // Count-weighted decrease: node row count x per-row decrease.
    node.gini_decrease = static_cast<double>(rows.size()) * split->gini_decrease;
  }
  const std::int32_t left = build_node(ctx, rows.subspan(0, n_left), depth + 1);
  const std::int32_t right = build_node(ctx, rows.subspan(n_left), depth + 1);
  (*ctx.nodes)[self].left = left;
  (*ctx.nodes)[self].right = right;
  return self;
}

}  // namespace

double gini_impurity(std::span<const std::uint32_t> class_counts) {
  std::uint64_t total = 0;
  for (auto c : class_counts) total += c;
  if (total == 0) throw std::invalid_argument("gini_impurity: all class counts are zero");
  return gini_from_counts(class_counts.data(), static_cast<int>(class_counts.size()),
                          static_cast<double>(total));
}

std::optional<SplitCandidate> best_split(std::span<const std::size_t> rows,
                                         std::span<const std::size_t> feature_subset,
                                         DataView data, std::span<const int> labels,
                                         int n_classes, std::size_t min_child_size) {
  const std::size_t n = rows.size();
  if (n < 2 || feature_subset.empty()) return std::nullopt;

  std::vector<std::uint32_t> parent(n_classes, 0);
  for (std::size_t r : rows) ++parent[labels[r]];
  const double n_d = static_cast<double>(n);
  const double parent_gini = gini_from_counts(parent.data(), n_classes, n_d);

  // Sorted scan per feature: sort (value, label) once, advance prefix counts,
  // and score only boundaries between distinct values.
  std::vector<std::pair<double, int>> sorted(n);
  std::vector<std::uint32_t> left(n_classes);
  std::vector<std::uint32_t> right(n_classes);

  std::optional<SplitCandidate> best;
  double best_decrease = 0.0;

  for (std::size_t f : feature_subset) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = rows[i];
      sorted[i] = {data.at(r, f), labels[r]};
    }
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front().first == sorted.back().first) continue;  // constant feature

    std::fill(left.begin(), left.end(), 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[sorted[i].second];
      if (sorted[i + 1].first == sorted[i].first) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < min_child_size || n_right < min_child_size) continue;

      for (int k = 0; k < n_classes; ++k) right[k] = parent[k] - left[k];
      const double gini_left = gini_from_counts(left.data(), n_classes, double(n_left));
      const double gini_right = gini_from_counts(right.data(), n_classes, double(n_right));
      const double wl = double(n_left) / n_d;
      const double wr = double(n_right) / n_d;
      const double decrease = parent_gini - (wl * gini_left + wr * gini_right);
      if (decrease > best_decrease) {
        best_decrease = decrease;
        best = SplitCandidate{f, (sorted[i].first + sorted[i + 1].first) / 2.0, decrease};
      }
    }
  }
  return best;
}

Tree grow(DataView data, std::span<const int> labels, const TreeParams& params,
          std::mt19937_64& rng) {
  std::vector<std::size_t> rows(data.n_rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return grow(data, labels, rows, params, rng);
}

Tree grow(DataView data, std::span<const int> labels, std::span<const std::size_t> rows,
          const TreeParams& params, std::mt19937_64& rng) {
  if (rows.empty()) throw std::invalid_argument("grow: no rows");
  if (params.n_classes < 1) throw std::invalid_argument("grow: n_classes must be positive");
  if (params.mtry > data.n_cols) throw std::invalid_argument("grow: mtry exceeds feature count");

  GrowContext ctx;
  ctx.data = data;
  ctx.labels = labels;
  ctx.params = params;
  ctx.rng = &rng;
  std::vector<TreeNode> nodes;
  ctx.nodes = &nodes;
  ctx.feature_perm.resize(data.n_cols);
  std::iota(ctx.feature_perm.begin(), ctx.feature_perm.end(), std::size_t{0});

  std::vector<std::size_t> mutable_rows(rows.begin(), rows.end());
  build_node(ctx, mutable_rows, 0);
  return Tree(std::move(nodes), params.n_classes, data.n_cols);
}

int predict_one(const Tree& tree, std::span<const double> row) {
  if (row.size() != tree.n_features())
    throw std::invalid_argument("predict_one: row length does not match training schema");
  const auto& nodes = tree.nodes();
  std::int32_t at = 0;
  while (!nodes[at].is_leaf())
    at = row[nodes[at].feature] < nodes[at].threshold ? nodes[at].left : nodes[at].right;

  const auto& counts = nodes[at].class_counts;
  int best = 0;
  for (int k = 1; k < static_cast<int>(counts.size()); ++k)
    if (counts[k] > counts[best]) best = k;
  return best;
}

std::vector<double> tree_gini_decreases(const Tree& tree) {
  std::vector<double> sums(tree.n_features(), 0.0);
  for (const auto& node : tree.nodes())
    if (!node.is_leaf()) sums[node.feature] += node.gini_decrease;
  return sums;
}

namespace {

void dump_text_node(const Tree& tree, std::int32_t at,
                    const std::vector<std::string>& feature_names, int indent,
                    std::ostringstream& out) {
  const TreeNode& node = tree.nodes()[at];
  out << std::string(2 * indent, ' ');
  if (node.is_leaf()) {
    out << "leaf counts=[";
    for (std::size_t k = 0; k < node.class_counts.size(); ++k)
      out << (k ? "," : "") << node.class_counts[k];
    out << "]\n";
    return;
  }
  out << feature_names[node.feature] << " < " << node.threshold << "\n";
  dump_text_node(tree, node.left, feature_names, indent + 1, out);
  dump_text_node(tree, node.right, feature_names, indent + 1, out);
}

nlohmann::json dump_json_node(const Tree& tree, std::int32_t at,
                              const std::vector<std::string>& feature_names) {
  const TreeNode& node = tree.nodes()[at];
  nlohmann::json j;
  if (node.is_leaf()) {
    j["type"] = "leaf";
    j["counts"] = node.class_counts;
    return j;
  }
  j["type"] = "split";
  j["feature"] = feature_names[node.feature];
  j["threshold"] = node.threshold;
  j["left"] = dump_json_node(tree, node.left, feature_names);
  j["right"] = dump_json_node(tree, node.right, feature_names);
  return j;
}

}  // namespace

std::string dump_tree_text(const Tree& tree, const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  dump_text_node(tree, 0, feature_names, 0, out);
  return out.str();
}

std::string dump_tree_json(const Tree& tree, const std::vector<std::string>& feature_names) {
  return dump_json_node(tree, 0, feature_names).dump(2);
}

}  // namespace modechoice
