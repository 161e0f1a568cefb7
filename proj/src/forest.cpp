#include "modechoice/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "modechoice/errors.hpp"
#include "modechoice/hash.hpp"
#include "modechoice/parallel.hpp"
#include "modechoice/rng.hpp"
#include "modechoice/version.hpp"

namespace modechoice {

namespace {
constexpr int kModelFormatVersion = 1;
constexpr const char* kModelFormatName = "modechoice-forest";
}  // namespace

ForestModel::ForestModel(std::vector<Tree> trees, ForestParams params,
                         std::uint64_t schema_fingerprint, std::vector<double> mdg)
    : trees_(std::move(trees)),
      params_(params),
      schema_fingerprint_(schema_fingerprint),
      mdg_(std::move(mdg)) {}

std::size_t resolve_mtry(const ForestParams& params, std::size_t n_features) {
  if (params.mtry != 0) return params.mtry;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(n_features))));
}

ForestModel fit(DataView data, std::span<const int> labels, int n_classes,
                const ForestParams& params, std::uint64_t schema_fingerprint, int threads) {
  if (data.n_rows < 2) throw ValidationError("fit requires at least 2 rows");
  if (params.n_trees < 1) throw ConfigError("n_trees must be at least 1");
  const std::size_t mtry = resolve_mtry(params, data.n_cols);
  if (mtry > data.n_cols) throw ConfigError("mtry exceeds the feature count");
  {
    std::set<int> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2)
      throw ValidationError("fit requires at least 2 distinct labels");
  }

  TreeParams tree_params;
  tree_params.min_leaf_size = params.min_leaf_size;
  tree_params.max_depth = params.max_depth;
  tree_params.mtry = mtry;
  tree_params.n_classes = n_classes;

  std::vector<Tree> trees(params.n_trees);
  parallel_for(params.n_trees, threads, [&](std::size_t t) {
    auto rng = make_stream(params.seed, {kStreamTree, t});
    std::vector<std::size_t> rows(data.n_rows);
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, data.n_rows - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    trees[t] = grow(data, labels, rows, tree_params, rng);
  });

  std::vector<double> mdg(data.n_cols, 0.0);
  for (const auto& tree : trees) {
    const auto decreases = tree_gini_decreases(tree);
    for (std::size_t f = 0; f < mdg.size(); ++f) mdg[f] += decreases[f];
  }
  for (auto& v : mdg) v /= static_cast<double>(params.n_trees);

  ForestParams resolved = params;
  resolved.mtry = mtry;
  return ForestModel(std::move(trees), resolved, schema_fingerprint, std::move(mdg));
}

namespace {

void tally_votes(const ForestModel& model, std::span<const double> row,
                 std::vector<std::uint32_t>& votes) {
  votes.assign(model.n_classes(), 0);
  for (const auto& tree : model.trees()) ++votes[predict_one(tree, row)];
}

int argmax_lowest(const std::vector<std::uint32_t>& votes) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(votes.size()); ++k)
    if (votes[k] > votes[best]) best = k;
  return best;
}

}  // namespace

int predict(const ForestModel& model, std::span<const double> row) {
  if (model.trees().empty()) throw std::logic_error("predict on an empty model");
  std::vector<std::uint32_t> votes;
  tally_votes(model, row, votes);
  return argmax_lowest(votes);
}

std::vector<double> predict_proba(const ForestModel& model, std::span<const double> row) {
  if (model.trees().empty()) throw std::logic_error("predict_proba on an empty model");
  std::vector<std::uint32_t> votes;
  tally_votes(model, row, votes);
  std::vector<double> fractions(votes.size());
  const double n = static_cast<double>(model.trees().size());
  for (std::size_t k = 0; k < votes.size(); ++k) fractions[k] = votes[k] / n;
  return fractions;
}

std::vector<double> permutation_importance(const ForestModel& model, DataView data,
                                           std::span<const int> labels, std::mt19937_64& rng) {
  const std::size_t n = data.n_rows;
  const std::size_t p = data.n_cols;
  if (n == 0) throw ValidationError("permutation_importance requires rows");

  auto accuracy_with_column = [&](std::size_t feature, const std::vector<double>* permuted) {
    std::vector<double> row(p);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto src = data.row(r);
      std::copy(src.begin(), src.end(), row.begin());
      if (permuted) row[feature] = (*permuted)[r];
      if (predict(model, row) == labels[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
  };

  const double baseline = accuracy_with_column(0, nullptr);
  std::vector<double> importance(p, 0.0);
  std::vector<double> column(n);
  for (std::size_t f = 0; f < p; ++f) {
    for (std::size_t r = 0; r < n; ++r) column[r] = data.at(r, f);
    std::shuffle(column.begin(), column.end(), rng);
    importance[f] = baseline - accuracy_with_column(f, &column);
  }
  return importance;
}

void save_model(const ForestModel& model, const std::string& path) {
  nlohmann::json j;
  j["format"] = kModelFormatName;
  j["format_version"] = kModelFormatVersion;
  j["version"] = kVersion;
  j["rng_algorithm"] = kRngAlgorithm;
  j["schema_fingerprint"] = to_hex(model.schema_fingerprint());
  j["n_classes"] = model.n_classes();
  j["n_features"] = model.n_features();
  const auto& p = model.params();
  j["params"] = {{"n_trees", p.n_trees},       {"mtry", p.mtry},
                 {"min_leaf_size", p.min_leaf_size}, {"max_depth", p.max_depth},
                 {"bootstrap", p.bootstrap},   {"seed", p.seed}};
  j["mdg"] = model.mdg();

  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees()) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) {
        nodes.push_back({{"counts", node.class_counts}});
      } else {
        nodes.push_back({{"feature", node.feature},
                         {"threshold", node.threshold},
                         {"left", node.left},
                         {"right", node.right},
                         {"gini_decrease", node.gini_decrease}});
      }
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << j.dump();
}

ForestModel load_model(const std::string& path, std::uint64_t expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("invalid model JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != kModelFormatName)
    throw std::runtime_error("not a forest model file: " + path);
  if (j.value("format_version", -1) != kModelFormatVersion)
    throw std::runtime_error("unsupported model format version");
  if (j.at("schema_fingerprint").get<std::string>() != to_hex(expected_fingerprint))
    throw SchemaError("model schema fingerprint does not match the expected schema");

  ForestParams params;
  const auto& jp = j.at("params");
  params.n_trees = jp.at("n_trees").get<std::size_t>();
  params.mtry = jp.at("mtry").get<std::size_t>();
  params.min_leaf_size = jp.at("min_leaf_size").get<std::size_t>();
  params.max_depth = jp.at("max_depth").get<std::size_t>();
  params.bootstrap = jp.at("bootstrap").get<bool>();
  params.seed = jp.at("seed").get<std::uint64_t>();

  const int n_classes = j.at("n_classes").get<int>();
  const std::size_t n_features = j.at("n_features").get<std::size_t>();

  std::vector<Tree> trees;
  for (const auto& jt : j.at("trees")) {
    std::vector<TreeNode> nodes;
    for (const auto& jn : jt.at("nodes")) {
      TreeNode node;
      if (jn.contains("counts")) {
        node.class_counts = jn.at("counts").get<std::vector<std::uint32_t>>();
      } else {
        node.feature = jn.at("feature").get<std::int32_t>();
        node.threshold = jn.at("threshold").get<double>();
        node.left = jn.at("left").get<std::int32_t>();
        node.right = jn.at("right").get<std::int32_t>();
        node.gini_decrease = jn.at("gini_decrease").get<double>();
      }
      nodes.push_back(std::move(node));
    }
    trees.emplace_back(std::move(nodes), n_classes, n_features);
  }
  return ForestModel(std::move(trees), params, expected_fingerprint,
                     j.at("mdg").get<std::vector<double>>());
}

}  // namespace modechoice
