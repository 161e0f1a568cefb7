#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "modechoice/tree.hpp"

namespace modechoice {

struct ForestParams {
  std::size_t n_trees = 500;
  std::size_t mtry = 0;  // 0 = auto: floor(sqrt(n_features))
  std::size_t min_leaf_size = 1;
  std::size_t max_depth = 0;  // 0 = unlimited
  bool bootstrap = true;      // false = identity sample (test hook)
  std::uint64_t seed = 42;
};

// Bagged ensemble with majority voting and accumulated mean-decrease-Gini
// importance. Immutable after fit; predict is reentrant.
class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<Tree> trees, ForestParams params, std::uint64_t schema_fingerprint,
              std::vector<double> mdg);

  const std::vector<Tree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  std::uint64_t schema_fingerprint() const { return schema_fingerprint_; }

  // Per-feature mean decrease in Gini: average over trees of the per-tree
  // summed decreases.
  const std::vector<double>& mdg() const { return mdg_; }

  int n_classes() const { return trees_.empty() ? 0 : trees_.front().n_classes(); }
  std::size_t n_features() const { return trees_.empty() ? 0 : trees_.front().n_features(); }

 private:
  std::vector<Tree> trees_;
  ForestParams params_;
  std::uint64_t schema_fingerprint_ = 0;
  std::vector<double> mdg_;
};

// Grows params.n_trees trees, each on a bootstrap sample (n draws with
// replacement) using an RNG substream derived from (seed, tree index), so the
// model is identical for any thread count. Requires >= 2 rows and >= 2
// distinct labels.
ForestModel fit(DataView data, std::span<const int> labels, int n_classes,
                const ForestParams& params, std::uint64_t schema_fingerprint, int threads = 1);

// Majority vote across trees; ties break to the lowest class id. Throws
// std::invalid_argument when the row length does not match.
int predict(const ForestModel& model, std::span<const double> row);

// Per-class tree-vote fractions; they sum to 1 and their argmax agrees with
// predict under its tie rule.
std::vector<double> predict_proba(const ForestModel& model, std::span<const double> row);

// Mean accuracy drop when one feature's column is permuted; the alternative
// importance measure, reported only behind an explicit flag.
std::vector<double> permutation_importance(const ForestModel& model, DataView data,
                                           std::span<const int> labels, std::mt19937_64& rng);

// Versioned JSON serialization. load_model rejects files whose schema
// fingerprint differs from expected_fingerprint.
void save_model(const ForestModel& model, const std::string& path);
ForestModel load_model(const std::string& path, std::uint64_t expected_fingerprint);

std::size_t resolve_mtry(const ForestParams& params, std::size_t n_features);

}  // namespace modechoice
