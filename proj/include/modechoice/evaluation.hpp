#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "modechoice/dataset.hpp"
#include "modechoice/forest.hpp"
#include "modechoice/tasks.hpp"

namespace modechoice {

struct ExperimentConfig {
  TaskSpec task;
  std::size_t repetitions = 100;
  double train_fraction = 0.75;
  ForestParams forest;  // forest.seed is ignored; per-repetition seeds derive from `seed`
  std::uint64_t seed = 42;
};

inline constexpr const char* kMethodNormalApprox = "normal-approx-of-mean";
inline constexpr const char* kMethodPercentile = "empirical-percentile";

struct IntervalSummary {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
};

struct IntervalSummaries {
  IntervalSummary normal_approx;  // mean +- 1.96 * sd / sqrt(R); the primary method
  IntervalSummary percentile;     // empirical 2.5 / 97.5 percentiles
};

// Requires >= 2 values.
IntervalSummaries summarize_interval(std::span<const double> values);

struct ExperimentResult {
  std::string task_id;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;  // after task exclusions

  // Config echo (thread count deliberately not included: results are
  // identical for any thread count).
  std::size_t repetitions = 0;
  double train_fraction = 0.0;
  ForestParams forest;
  std::uint64_t seed = 0;

  std::vector<double> overall_accuracy;                    // [rep]
  std::vector<std::vector<double>> per_class_accuracy;     // [rep][class]
  std::vector<std::vector<std::size_t>> test_class_counts; // [rep][class]
  std::vector<std::vector<double>> mdg;                    // [rep][feature]

  IntervalSummaries overall_summary;
  std::vector<IntervalSummaries> class_summaries;
};

// Random downsampling without replacement so every task class has exactly the
// minority class's row count; rows outside the task's modes are dropped and
// the output order is shuffled. Labels remain raw travel modes.
Dataset balance(const Dataset& data, const TaskSpec& task, std::mt19937_64& rng);

// Uniform random partition with |train| = round-half-up(train_fraction * n).
// Throws when either side would be empty.
std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double train_fraction,
                                             std::mt19937_64& rng);

// A dataset projected onto a task: class-mapped labels, excluded columns
// dropped, rows of unmapped modes removed.
struct TaskTable {
  std::vector<std::string> feature_names;
  std::vector<double> values;  // row-major
  std::vector<int> labels;
  int n_classes = 0;
  std::uint64_t fingerprint = 0;

  std::size_t n_rows() const { return labels.size(); }
  std::size_t n_cols() const { return feature_names.size(); }
  DataView view() const { return {values.data(), n_rows(), n_cols()}; }
};

TaskTable project_task(const Dataset& data, const TaskSpec& task);

// One repetition of the protocol, shared by run_experiment and the partial
// dependence sweep: derive the repetition substream, balance, split, fit on
// the train side. Exposed so interpretation code reproduces the exact models.
struct Repetition {
  ForestModel model;
  TaskTable test;
  double overall_accuracy = 0.0;
  std::vector<double> per_class_accuracy;
  std::vector<std::size_t> test_class_counts;
};

Repetition run_repetition(const Dataset& data, const ExperimentConfig& config,
                          std::size_t repetition);

// The full protocol: for each repetition balance, split, fit, evaluate on the
// held-out side; per-class accuracy is within-class recall. Balancing happens
// before splitting. Results are identical for any thread count.
ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config,
                                int threads = 1);

// JSON round trip for result files (no timestamps; byte-stable).
std::string result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json_file(const std::string& path);

// task,class,mean,lower,upper,method rows (overall first), primary method
// only, probabilities rounded to 4 decimals.
void write_summary_csv(const ExperimentResult& result, const std::string& path);

}  // namespace modechoice
