#pragma once

#include <string>
#include <vector>

#include "modechoice/evaluation.hpp"

namespace modechoice {

struct ImportanceEntry {
  std::string feature;
  double mean_mdg = 0.0;
  double relative = 0.0;  // mean_mdg / max mean_mdg, in [0,1]
};

// Entries sorted by descending mean MDG; the top entry has relative
// importance exactly 1.
struct ImportanceReport {
  std::vector<ImportanceEntry> entries;
};

// Mean over repetitions per feature, expressed relative to the maximum.
// Requires at least one mdg vector.
ImportanceReport importance_report(const ExperimentResult& result);

// For each grid value v: overwrite `feature` with v in every row and average
// predict_proba(target_class) over the rows.
std::vector<double> partial_dependence(const ForestModel& model, DataView data,
                                       std::size_t feature, std::span<const double> grid,
                                       int target_class);

struct PDPCurve {
  std::string feature;
  std::vector<double> grid;                        // strictly ascending
  std::vector<std::vector<double>> per_repetition; // [rep][grid point]
  std::vector<double> mean;                        // pointwise over repetitions
};

// Reproduces each repetition's fitted model (same substreams as
// run_experiment) and evaluates its partial dependence over that
// repetition's test rows.
PDPCurve pdp_across_repetitions(const Dataset& data, const ExperimentConfig& config,
                                const std::string& feature, std::span<const double> grid,
                                int target_class, int threads = 1);

// feature,mean_mdg,relative_pct rows, descending.
void write_importance_csv(const ImportanceReport& report, const std::string& path);

// grid_value,mean_probability[,rep_0..] rows.
void write_pdp_csv(const PDPCurve& curve, const std::string& path, bool include_repetitions);

}  // namespace modechoice
