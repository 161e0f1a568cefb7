#include "modechoice/interpretation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "modechoice/dataset_io.hpp"
#include "modechoice/errors.hpp"
#include "modechoice/parallel.hpp"

namespace modechoice {

ImportanceReport importance_report(const ExperimentResult& result) {
  if (result.mdg.empty() || result.mdg.front().empty())
    throw ValidationError("importance_report requires at least one mdg vector");

  const std::size_t p = result.feature_names.size();
  std::vector<double> means(p, 0.0);
  for (const auto& rep : result.mdg) {
    if (rep.size() != p) throw ValidationError("mdg vector length does not match feature names");
    for (std::size_t f = 0; f < p; ++f) means[f] += rep[f];
  }
  for (auto& m : means) m /= static_cast<double>(result.mdg.size());

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });

  const double max_mean = means[order.front()];
  ImportanceReport report;
  for (std::size_t f : order) {
    ImportanceEntry entry;
    entry.feature = result.feature_names[f];
    entry.mean_mdg = means[f];
    entry.relative = max_mean > 0.0 ? means[f] / max_mean : 0.0;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::vector<double> partial_dependence(const ForestModel& model, DataView data,
                                       std::size_t feature, std::span<const double> grid,
                                       int target_class) {
  if (feature >= data.n_cols) throw std::invalid_argument("partial_dependence: bad feature index");
  if (grid.empty()) throw std::invalid_argument("partial_dependence: empty grid");
  if (target_class < 0 || target_class >= model.n_classes())
    throw std::invalid_argument("partial_dependence: bad target class");
  if (data.n_rows == 0) throw ValidationError("partial_dependence requires rows");

  std::vector<double> curve(grid.size(), 0.0);
  std::vector<double> row(data.n_cols);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.n_rows; ++r) {
      const auto src = data.row(r);
      std::copy(src.begin(), src.end(), row.begin());
      row[feature] = grid[g];
      sum += predict_proba(model, row)[target_class];
    }
    curve[g] = sum / static_cast<double>(data.n_rows);
  }
  return curve;
}

PDPCurve pdp_across_repetitions(const Dataset& data, const ExperimentConfig& config,
                                const std::string& feature, std::span<const double> grid,
                                int target_class, int threads) {
  for (const auto& excluded : config.task.excluded_features) {
    if (excluded == feature)
      throw ConfigError("feature '" + feature + "' is excluded by task " + config.task.id);
  }
  if (grid.size() < 1) throw std::invalid_argument("pdp requires a non-empty grid");
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (grid[g] <= grid[g - 1]) throw std::invalid_argument("pdp grid must be strictly ascending");
  }

  PDPCurve curve;
  curve.feature = feature;
  curve.grid.assign(grid.begin(), grid.end());
  curve.per_repetition.resize(config.repetitions);

  parallel_for(config.repetitions, threads, [&](std::size_t r) {
    try {
      Repetition rep = run_repetition(data, config, r);
      const auto idx = std::find(rep.test.feature_names.begin(), rep.test.feature_names.end(),
                                 feature);
      if (idx == rep.test.feature_names.end())
        throw ConfigError("feature '" + feature + "' not present after task projection");
      const std::size_t f = static_cast<std::size_t>(idx - rep.test.feature_names.begin());
      curve.per_repetition[r] =
          partial_dependence(rep.model, rep.test.view(), f, grid, target_class);
    } catch (const std::exception& e) {
      throw std::runtime_error("repetition " + std::to_string(r) + ": " + e.what());
    }
  });

  curve.mean.assign(grid.size(), 0.0);
  for (const auto& rep : curve.per_repetition)
    for (std::size_t g = 0; g < grid.size(); ++g) curve.mean[g] += rep[g];
  for (auto& v : curve.mean) v /= static_cast<double>(config.repetitions);
  return curve;
}

void write_importance_csv(const ImportanceReport& report, const std::string& path) {
  std::ostringstream out;
  out << "feature,mean_mdg,relative_pct\n";
  for (const auto& entry : report.entries) {
    out << entry.feature << ',' << format_double(entry.mean_mdg) << ','
        << format_double(entry.relative * 100.0) << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write importance file: " + path);
  file << out.str();
}

void write_pdp_csv(const PDPCurve& curve, const std::string& path, bool include_repetitions) {
  std::ostringstream out;
  out << "grid_value,mean_probability";
  if (include_repetitions)
    for (std::size_t r = 0; r < curve.per_repetition.size(); ++r) out << ",rep_" << r;
  out << '\n';
  for (std::size_t g = 0; g < curve.grid.size(); ++g) {
    out << format_double(curve.grid[g]) << ',' << format_double(curve.mean[g]);
    if (include_repetitions)
      for (const auto& rep : curve.per_repetition) out << ',' << format_double(rep[g]);
    out << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write pdp file: " + path);
  file << out.str();
}

}  // namespace modechoice
