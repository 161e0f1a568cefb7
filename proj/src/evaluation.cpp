#include "modechoice/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "modechoice/errors.hpp"
#include "modechoice/hash.hpp"
#include "modechoice/parallel.hpp"
#include "modechoice/rng.hpp"
#include "modechoice/version.hpp"

namespace modechoice {

namespace {
constexpr int kResultFormatVersion = 1;
constexpr const char* kResultFormatName = "modechoice-result";
}  // namespace

IntervalSummaries summarize_interval(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("summarize_interval requires at least 2 values");

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double half_width = 1.96 * sd / std::sqrt(static_cast<double>(n));

  IntervalSummaries out;
  out.normal_approx = {mean, mean - half_width, mean + half_width, kMethodNormalApprox};

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Linear interpolation between order statistics (R type-7 quantile).
  auto quantile = [&](double q) {
    const double h = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
  };
  out.percentile = {mean, quantile(0.025), quantile(0.975), kMethodPercentile};
  return out;
}

Dataset balance(const Dataset& data, const TaskSpec& task, std::mt19937_64& rng) {
  std::vector<std::vector<std::size_t>> by_class(task.n_classes);
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    const int cls = task.class_of(data.labels()[r]);
    if (cls >= 0) by_class[cls].push_back(r);
  }
  std::size_t minority = data.n_rows();
  for (int c = 0; c < task.n_classes; ++c) {
    if (by_class[c].empty())
      throw ValidationError("task " + task.id + ": class '" + task.class_names[c] +
                            "' has no rows");
    minority = std::min(minority, by_class[c].size());
  }

  std::vector<std::size_t> selected;
  selected.reserve(minority * task.n_classes);
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    selected.insert(selected.end(), rows.begin(), rows.begin() + minority);
  }
  std::shuffle(selected.begin(), selected.end(), rng);
  return data.select_rows(selected);
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double train_fraction,
                                             std::mt19937_64& rng) {
  const std::size_t n = data.n_rows();
  if (n < 2) throw ValidationError("split requires at least 2 rows");
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw ConfigError("train_fraction must be in (0,1)");

  // Round half up.
  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
  if (n_train == 0 || n_train == n)
    throw ValidationError("split would leave an empty train or test set");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::span<const std::size_t> all(perm);
  return {data.select_rows(all.subspan(0, n_train)), data.select_rows(all.subspan(n_train))};
}

TaskTable project_task(const Dataset& data, const TaskSpec& task) {
  const FeatureSchema& schema = data.schema();
  std::vector<bool> excluded(schema.size(), false);
  for (const auto& name : task.excluded_features) {
    const auto idx = schema.index_of(name);
    if (!idx) throw ConfigError("excluded column does not exist: " + name);
    excluded[*idx] = true;
  }

  TaskTable table;
  std::string fingerprint_key;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (excluded[c]) continue;
    keep.push_back(c);
    table.feature_names.push_back(schema.column(c).name);
    fingerprint_key += schema.column(c).name;
    fingerprint_key += ':';
    fingerprint_key += to_string(schema.column(c).kind);
    fingerprint_key += ';';
  }
  table.fingerprint = fnv1a64(fingerprint_key);
  table.n_classes = task.n_classes;

  table.values.reserve(data.n_rows() * keep.size());
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    const int cls = task.class_of(data.labels()[r]);
    if (cls < 0) continue;
    for (std::size_t c : keep) table.values.push_back(data.at(r, c));
    table.labels.push_back(cls);
  }
  return table;
}

Repetition run_repetition(const Dataset& data, const ExperimentConfig& config,
                          std::size_t repetition) {
  auto rng = make_stream(config.seed, {kStreamRepetition, repetition});

  const Dataset balanced = balance(data, config.task, rng);
  auto [train, test] = train_test_split(balanced, config.train_fraction, rng);

  TaskTable train_table = project_task(train, config.task);
  Repetition rep;
  rep.test = project_task(test, config.task);

  ForestParams params = config.forest;
  params.seed = rng();  // per-repetition forest seed drawn from the repetition stream
  rep.model = fit(train_table.view(), train_table.labels, train_table.n_classes, params,
                  train_table.fingerprint, /*threads=*/1);

  const int k = rep.test.n_classes;
  std::vector<std::size_t> correct(k, 0), total(k, 0);
  for (std::size_t r = 0; r < rep.test.n_rows(); ++r) {
    const int truth = rep.test.labels[r];
    ++total[truth];
    if (predict(rep.model, rep.test.view().row(r)) == truth) ++correct[truth];
  }
  std::size_t correct_all = 0, n_test = 0;
  rep.per_class_accuracy.resize(k);
  rep.test_class_counts.resize(k);
  for (int c = 0; c < k; ++c) {
    rep.per_class_accuracy[c] =
        total[c] == 0 ? 0.0 : static_cast<double>(correct[c]) / static_cast<double>(total[c]);
    rep.test_class_counts[c] = total[c];
    correct_all += correct[c];
    n_test += total[c];
  }
  rep.overall_accuracy = static_cast<double>(correct_all) / static_cast<double>(n_test);

  // Identity: overall equals the class-size-weighted mean of per-class recalls.
  double weighted = 0.0;
  for (int c = 0; c < k; ++c)
    weighted += static_cast<double>(total[c]) * rep.per_class_accuracy[c];
  weighted /= static_cast<double>(n_test);
  if (std::abs(weighted - rep.overall_accuracy) > 1e-12)
    throw std::logic_error("per-class/overall accuracy identity violated");

  return rep;
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& config,
                                int threads) {
  if (config.repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (config.train_fraction <= 0.0 || config.train_fraction >= 1.0)
    throw ConfigError("train_fraction must be in (0,1)");

  ExperimentResult result;
  result.task_id = config.task.id;
  result.class_names = config.task.class_names;
  result.repetitions = config.repetitions;
  result.train_fraction = config.train_fraction;
  result.forest = config.forest;
  result.seed = config.seed;
  {
    // Resolve feature names (and auto mtry) once for the result header; the
    // column projection does not depend on rows.
    const std::vector<std::size_t> no_rows;
    TaskTable probe = project_task(data.select_rows(no_rows), config.task);
    result.feature_names = probe.feature_names;
    result.forest.mtry = resolve_mtry(config.forest, probe.n_cols());
  }

  const std::size_t reps = config.repetitions;
  result.overall_accuracy.resize(reps);
  result.per_class_accuracy.resize(reps);
  result.test_class_counts.resize(reps);
  result.mdg.resize(reps);

  parallel_for(reps, threads, [&](std::size_t r) {
    try {
      Repetition rep = run_repetition(data, config, r);
      result.overall_accuracy[r] = rep.overall_accuracy;
      result.per_class_accuracy[r] = std::move(rep.per_class_accuracy);
      result.test_class_counts[r] = std::move(rep.test_class_counts);
      result.mdg[r] = rep.model.mdg();
    } catch (const std::exception& e) {
      throw std::runtime_error("repetition " + std::to_string(r) + ": " + e.what());
    }
  });

  if (reps >= 2) {
    result.overall_summary = summarize_interval(result.overall_accuracy);
    result.class_summaries.resize(config.task.n_classes);
    std::vector<double> column(reps);
    for (int c = 0; c < config.task.n_classes; ++c) {
      for (std::size_t r = 0; r < reps; ++r) column[r] = result.per_class_accuracy[r][c];
      result.class_summaries[c] = summarize_interval(column);
    }
  } else {
    // Single repetition: degenerate zero-width summaries around the value.
    auto degenerate = [](double v) {
      IntervalSummaries s;
      s.normal_approx = {v, v, v, kMethodNormalApprox};
      s.percentile = {v, v, v, kMethodPercentile};
      return s;
    };
    result.overall_summary = degenerate(result.overall_accuracy[0]);
    for (int c = 0; c < config.task.n_classes; ++c)
      result.class_summaries.push_back(degenerate(result.per_class_accuracy[0][c]));
  }
  return result;
}

namespace {

nlohmann::json summaries_to_json(const IntervalSummaries& s) {
  return {{"normal_approx_of_mean",
           {{"mean", s.normal_approx.mean},
            {"lower", s.normal_approx.lower},
            {"upper", s.normal_approx.upper}}},
          {"empirical_percentile",
           {{"mean", s.percentile.mean},
            {"lower", s.percentile.lower},
            {"upper", s.percentile.upper}}}};
}

IntervalSummaries summaries_from_json(const nlohmann::json& j) {
  IntervalSummaries s;
  const auto& na = j.at("normal_approx_of_mean");
  s.normal_approx = {na.at("mean").get<double>(), na.at("lower").get<double>(),
                     na.at("upper").get<double>(), kMethodNormalApprox};
  const auto& pc = j.at("empirical_percentile");
  s.percentile = {pc.at("mean").get<double>(), pc.at("lower").get<double>(),
                  pc.at("upper").get<double>(), kMethodPercentile};
  return s;
}

}  // namespace

std::string result_to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["format"] = kResultFormatName;
  j["format_version"] = kResultFormatVersion;
  j["version"] = kVersion;
  j["rng_algorithm"] = kRngAlgorithm;
  j["task"] = result.task_id;
  j["class_names"] = result.class_names;
  j["feature_names"] = result.feature_names;
  j["repetitions"] = result.repetitions;
  j["train_fraction"] = result.train_fraction;
  j["seed"] = result.seed;
  j["forest"] = {{"n_trees", result.forest.n_trees},
                 {"mtry", result.forest.mtry},
                 {"min_leaf_size", result.forest.min_leaf_size},
                 {"max_depth", result.forest.max_depth},
                 {"bootstrap", result.forest.bootstrap}};
  j["overall_accuracy"] = result.overall_accuracy;
  j["per_class_accuracy"] = result.per_class_accuracy;
  j["test_class_counts"] = result.test_class_counts;
  j["mdg"] = result.mdg;
  j["summaries"] = {{"overall", summaries_to_json(result.overall_summary)}};
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& s : result.class_summaries) classes.push_back(summaries_to_json(s));
  j["summaries"]["classes"] = std::move(classes);
  return j.dump(2);
}

ExperimentResult result_from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open result file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("invalid result JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != kResultFormatName)
    throw std::runtime_error("not a result file: " + path);
  if (j.value("format_version", -1) != kResultFormatVersion)
    throw std::runtime_error("unsupported result format version");

  ExperimentResult result;
  result.task_id = j.at("task").get<std::string>();
  result.class_names = j.at("class_names").get<std::vector<std::string>>();
  result.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  result.repetitions = j.at("repetitions").get<std::size_t>();
  result.train_fraction = j.at("train_fraction").get<double>();
  result.seed = j.at("seed").get<std::uint64_t>();
  const auto& jf = j.at("forest");
  result.forest.n_trees = jf.at("n_trees").get<std::size_t>();
  result.forest.mtry = jf.at("mtry").get<std::size_t>();
  result.forest.min_leaf_size = jf.at("min_leaf_size").get<std::size_t>();
  result.forest.max_depth = jf.at("max_depth").get<std::size_t>();
  result.forest.bootstrap = jf.at("bootstrap").get<bool>();
  result.overall_accuracy = j.at("overall_accuracy").get<std::vector<double>>();
  result.per_class_accuracy =
      j.at("per_class_accuracy").get<std::vector<std::vector<double>>>();
  result.test_class_counts =
      j.at("test_class_counts").get<std::vector<std::vector<std::size_t>>>();
  result.mdg = j.at("mdg").get<std::vector<std::vector<double>>>();
  result.overall_summary = summaries_from_json(j.at("summaries").at("overall"));
  for (const auto& js : j.at("summaries").at("classes"))
    result.class_summaries.push_back(summaries_from_json(js));
  return result;
}

void write_summary_csv(const ExperimentResult& result, const std::string& path) {
  auto fmt4 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "task,class,mean,lower,upper,method\n";
  auto row = [&](const std::string& cls, const IntervalSummary& s) {
    out << result.task_id << ',' << cls << ',' << fmt4(s.mean) << ',' << fmt4(s.lower) << ','
        << fmt4(s.upper) << ',' << s.method << '\n';
  };
  row("overall", result.overall_summary.normal_approx);
  for (std::size_t c = 0; c < result.class_names.size(); ++c)
    row(result.class_names[c], result.class_summaries[c].normal_approx);

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write summary file: " + path);
  file << out.str();
}

}  // namespace modechoice
