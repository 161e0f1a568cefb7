// Command-line front end: generate synthetic data, run repeated-split forest
// experiments, and export importance / partial dependence / descriptive
// tables as plot-ready CSV.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "modechoice/dataset_io.hpp"
#include "modechoice/describe.hpp"
#include "modechoice/errors.hpp"
#include "modechoice/evaluation.hpp"
#include "modechoice/hash.hpp"
#include "modechoice/interpretation.hpp"
#include "modechoice/manifest.hpp"
#include "modechoice/rng.hpp"
#include "modechoice/synth.hpp"
#include "modechoice/tasks.hpp"
#include "modechoice/version.hpp"

namespace mc = modechoice;
namespace fs = std::filesystem;

namespace {

// Flag resolution precedence: CLI > MODECHOICE_* environment variable >
// config file > built-in default.
class OptionResolver {
 public:
  OptionResolver(CLI::App* cmd, const nlohmann::json* config) : cmd_(cmd), config_(config) {}

  template <typename T>
  void resolve(const std::string& flag, const char* env_suffix, const char* config_key,
               T& value) const {
    if (cmd_->count(flag) > 0) return;  // explicit CLI wins
    const std::string env_name = std::string("MODECHOICE_") + env_suffix;
    if (const char* env = std::getenv(env_name.c_str())) {
      value = parse_env<T>(env_name, env);
      return;
    }
    if (config_ && config_->contains(config_key)) {
      try {
        value = config_->at(config_key).get<T>();
      } catch (const nlohmann::json::exception&) {
        throw mc::ConfigError("config key '" + std::string(config_key) + "' has the wrong type");
      }
    }
  }

 private:
  template <typename T>
  static T parse_env(const std::string& name, const std::string& text) {
    if constexpr (std::is_same_v<T, std::string>) {
      return text;
    } else if constexpr (std::is_same_v<T, double>) {
      try {
        return std::stod(text);
      } catch (...) {
        throw mc::ConfigError("bad value in " + name + ": " + text);
      }
    } else {
      T value{};
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size())
        throw mc::ConfigError("bad value in " + name + ": " + text);
      return value;
    }
  }

  CLI::App* cmd_;
  const nlohmann::json* config_;
};

std::optional<nlohmann::json> load_config_json(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw mc::ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw mc::ConfigError("invalid config JSON: " + std::string(e.what()));
  }
  return j;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> build_grid(double min, double max, double step) {
  if (step <= 0.0) throw mc::ConfigError("grid step must be positive");
  if (max <= min) throw mc::ConfigError("grid max must exceed grid min");
  std::size_t n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
  if (min + static_cast<double>(n) * step < max - 1e-12) ++n;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = min + static_cast<double>(i) * step;
  return grid;
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Shared experiment flags for `run` and `pdp`.
struct RunFlags {
  std::string data_path;
  std::string task_id = "T1";
  std::string config_path;
  std::string exclude;
  std::size_t reps = 100;
  std::size_t trees = 500;
  std::size_t mtry = 0;  // 0 = auto
  std::size_t min_leaf = 1;
  std::size_t max_depth = 0;
  double train_fraction = 0.75;
  std::uint64_t seed = 42;
  int threads = default_threads();

  void add_common(CLI::App* cmd) {
    cmd->add_option("--data", data_path, "input dataset CSV")->required();
    cmd->add_option("--task", task_id, "task id (T1..T6)");
    cmd->add_option("--config", config_path, "JSON config file with flag defaults");
    cmd->add_option("--exclude", exclude, "comma-separated predictor columns to withhold");
    cmd->add_option("--reps", reps, "number of balanced train/test repetitions");
    cmd->add_option("--trees", trees, "trees per forest");
    cmd->add_option("--mtry", mtry, "features sampled per node (0 = floor(sqrt(p)))");
    cmd->add_option("--min-leaf", min_leaf, "minimum rows per leaf");
    cmd->add_option("--max-depth", max_depth, "maximum tree depth (0 = unlimited)");
    cmd->add_option("--train-fraction", train_fraction, "training share of each split");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--threads", threads, "worker cap (results are thread-count independent)");
  }

  void resolve_all(CLI::App* cmd, const nlohmann::json* config) {
    const OptionResolver r(cmd, config);
    r.resolve("--task", "TASK", "task", task_id);
    r.resolve("--exclude", "EXCLUDE", "exclude", exclude);
    r.resolve("--reps", "REPS", "reps", reps);
    r.resolve("--trees", "TREES", "trees", trees);
    r.resolve("--mtry", "MTRY", "mtry", mtry);
    r.resolve("--min-leaf", "MIN_LEAF", "min_leaf", min_leaf);
    r.resolve("--max-depth", "MAX_DEPTH", "max_depth", max_depth);
    r.resolve("--train-fraction", "TRAIN_FRACTION", "train_fraction", train_fraction);
    r.resolve("--seed", "SEED", "seed", seed);
    r.resolve("--threads", "THREADS", "threads", threads);
  }

  mc::ExperimentConfig to_experiment_config() const {
    mc::TaskSpec task = mc::task_by_id(task_id);
    for (const auto& col : split_list(exclude)) {
      if (std::find(task.excluded_features.begin(), task.excluded_features.end(), col) ==
          task.excluded_features.end())
        task.excluded_features.push_back(col);
    }
    mc::ExperimentConfig config;
    config.task = std::move(task);
    config.repetitions = reps;
    config.train_fraction = train_fraction;
    config.forest.n_trees = trees;
    config.forest.mtry = mtry;
    config.forest.min_leaf_size = min_leaf;
    config.forest.max_depth = max_depth;
    config.seed = seed;
    return config;
  }

  nlohmann::json snapshot() const {
    return {{"data", data_path},       {"task", task_id},
            {"exclude", exclude},      {"reps", reps},
            {"trees", trees},          {"mtry", mtry},
            {"min_leaf", min_leaf},    {"max_depth", max_depth},
            {"train_fraction", train_fraction},
            {"seed", seed},            {"threads", threads}};
  }
};

int cmd_synth(const std::string& config_path, const std::string& out_dir,
              CLI::App* cmd, std::uint64_t seed_flag) {
  mc::SynthConfig config = config_path.empty() ? mc::SynthConfig::defaults()
                                               : mc::SynthConfig::from_json_file(config_path);
  if (cmd->count("--seed") > 0) {
    config.set_seed(seed_flag);
  } else if (const char* env = std::getenv("MODECHOICE_SEED")) {
    config.set_seed(std::stoull(env));
  }
  config.validate();

  fs::create_directories(out_dir);
  const mc::Dataset data = mc::generate(config);
  const std::string csv_path = out_dir + "/dataset.csv";
  mc::write_csv(data, csv_path);

  const auto counts = data.mode_counts();
  for (mc::TravelMode mode : mc::kAllModes)
    std::cout << mc::to_string(mode) << "=" << counts[mc::mode_index(mode)] << "\n";
  std::cout << "total=" << data.n_rows() << "\n";

  auto manifest =
      mc::make_manifest("synth", nlohmann::json::parse(config.to_json()), config.seed());
  if (!config_path.empty()) mc::add_input(manifest, config_path, config_path);
  mc::add_output(manifest, "dataset.csv", csv_path);
  mc::write_manifest(manifest, out_dir);
  return 0;
}

int cmd_run(RunFlags& flags, CLI::App* cmd, const std::string& out_dir, bool perm_importance) {
  const auto config_json = load_config_json(flags.config_path);
  flags.resolve_all(cmd, config_json ? &*config_json : nullptr);

  const mc::Dataset data = mc::load_csv(flags.data_path, mc::FeatureSchema::canonical());
  const mc::ExperimentConfig config = flags.to_experiment_config();
  const mc::ExperimentResult result = mc::run_experiment(data, config, flags.threads);

  fs::create_directories(out_dir);
  const std::string summary_path = out_dir + "/summary.csv";
  const std::string result_path = out_dir + "/result.json";
  mc::write_summary_csv(result, summary_path);
  {
    std::ofstream out(result_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + result_path);
    out << mc::result_to_json(result);
  }

  auto manifest = mc::make_manifest("run", flags.snapshot(), flags.seed);
  mc::add_input(manifest, flags.data_path, flags.data_path);
  mc::add_output(manifest, "summary.csv", summary_path);
  mc::add_output(manifest, "result.json", result_path);

  if (perm_importance) {
    // Alternative importance measure for the first repetition's model,
    // evaluated on its test rows; MDG remains the reported measure.
    mc::Repetition rep = mc::run_repetition(data, config, 0);
    auto rng = mc::make_stream(config.seed, {mc::kStreamRepetition, config.repetitions});
    const auto importance =
        mc::permutation_importance(rep.model, rep.test.view(), rep.test.labels, rng);
    const std::string perm_path = out_dir + "/perm_importance.csv";
    std::ofstream out(perm_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + perm_path);
    out << "feature,accuracy_drop\n";
    for (std::size_t f = 0; f < importance.size(); ++f)
      out << rep.test.feature_names[f] << ',' << mc::format_double(importance[f]) << '\n';
    out.close();
    mc::add_output(manifest, "perm_importance.csv", perm_path);
  }

  mc::write_manifest(manifest, out_dir);

  std::cout << "task " << result.task_id << ": overall "
            << result.overall_summary.normal_approx.mean << " ["
            << result.overall_summary.normal_approx.lower << "; "
            << result.overall_summary.normal_approx.upper << "]\n";
  return 0;
}

int cmd_importance(const std::string& result_path, const std::string& out_path) {
  const mc::ExperimentResult result = mc::result_from_json_file(result_path);
  const mc::ImportanceReport report = mc::importance_report(result);
  mc::write_importance_csv(report, out_path);
  return 0;
}

int cmd_pdp(RunFlags& flags, CLI::App* cmd, const std::string& feature, double grid_min,
            double grid_max, double grid_step, int target_class, bool per_rep,
            const std::string& out_path) {
  const auto config_json = load_config_json(flags.config_path);
  flags.resolve_all(cmd, config_json ? &*config_json : nullptr);

  const mc::Dataset data = mc::load_csv(flags.data_path, mc::FeatureSchema::canonical());
  const mc::ExperimentConfig config = flags.to_experiment_config();
  if (!data.schema().index_of(feature))
    throw mc::SchemaError("unknown feature: " + feature);

  const auto grid = build_grid(grid_min, grid_max, grid_step);
  const mc::PDPCurve curve =
      mc::pdp_across_repetitions(data, config, feature, grid, target_class, flags.threads);
  mc::write_pdp_csv(curve, out_path, per_rep);
  return 0;
}

int cmd_describe(const std::string& data_path, const std::string& out_dir, double max_km,
                 double bin_width) {
  const mc::Dataset data = mc::load_csv(data_path, mc::FeatureSchema::canonical());
  fs::create_directories(out_dir);

  // Mode columns in the conventional reporting order.
  const std::array<mc::TravelMode, 4> order = {mc::TravelMode::Car,
                                               mc::TravelMode::PublicTransport,
                                               mc::TravelMode::Cycling, mc::TravelMode::Walking};

  const auto summary = mc::describe(data);
  const std::string means_path = out_dir + "/means.csv";
  {
    std::ostringstream out;
    out << "column";
    for (auto mode : order) out << ',' << mc::to_string(mode);
    out << ",overall\n";
    for (std::size_t c = 0; c < data.n_features(); ++c) {
      out << data.schema().column(c).name;
      for (auto mode : order) {
        const auto mean = summary.mode_mean(mode, c);
        out << ',';
        if (mean) out << mc::format_double(*mean);
      }
      out << ',' << mc::format_double(summary.overall_means[c]) << '\n';
    }
    out << "observations";
    for (auto mode : order) out << ',' << summary.counts[mc::mode_index(mode)];
    out << ',' << data.n_rows() << '\n';
    std::ofstream file(means_path, std::ios::binary);
    file << out.str();
  }

  // Correlations over columns with variance; constant columns are skipped so
  // degenerate datasets still describe cleanly.
  const std::string corr_path = out_dir + "/correlation.csv";
  {
    std::vector<std::string> selected;
    if (data.n_rows() >= 2) {
      for (std::size_t c = 0; c < data.n_features(); ++c) {
        double first = data.at(0, c);
        for (std::size_t r = 1; r < data.n_rows(); ++r) {
          if (data.at(r, c) != first) {
            selected.push_back(data.schema().column(c).name);
            break;
          }
        }
      }
    }
    std::ostringstream out;
    if (selected.empty()) {
      out << "column\n";
    } else {
      const auto corr = mc::correlation_matrix(data, selected);
      out << "column";
      for (const auto& name : corr.names) out << ',' << name;
      out << '\n';
      for (std::size_t i = 0; i < corr.names.size(); ++i) {
        out << corr.names[i];
        for (std::size_t j = 0; j < corr.names.size(); ++j)
          out << ',' << mc::format_double(corr.at(i, j));
        out << '\n';
      }
    }
    std::ofstream file(corr_path, std::ios::binary);
    file << out.str();
  }

  const std::string hist_path = out_dir + "/histogram.csv";
  {
    const auto hist = mc::distance_histogram(data, max_km, bin_width);
    std::ostringstream out;
    out << "bin_lower_km,bin_upper_km";
    for (auto mode : order) out << ',' << mc::to_string(mode);
    out << '\n';
    for (std::size_t b = 0; b < hist.n_bins(); ++b) {
      out << mc::format_double(b * hist.bin_width_km) << ','
          << mc::format_double(std::min((b + 1) * hist.bin_width_km, hist.max_km));
      for (auto mode : order) out << ',' << hist.counts[mc::mode_index(mode)][b];
      out << '\n';
    }
    std::ofstream file(hist_path, std::ios::binary);
    file << out.str();
  }

  auto manifest = mc::make_manifest(
      "describe", {{"data", data_path}, {"max_km", max_km}, {"bin_width_km", bin_width}}, 0);
  mc::add_input(manifest, data_path, data_path);
  mc::add_output(manifest, "means.csv", means_path);
  mc::add_output(manifest, "correlation.csv", corr_path);
  mc::add_output(manifest, "histogram.csv", hist_path);
  mc::write_manifest(manifest, out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-forest travel mode choice experiments"};
  app.set_version_flag("--version", mc::kVersion);
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a calibrated synthetic dataset");
  std::string synth_config, synth_out = "synth_out";
  std::uint64_t synth_seed = 42;
  synth->add_option("--config", synth_config, "SynthConfig JSON (defaults when omitted)");
  synth->add_option("--seed", synth_seed, "master seed (overrides config)");
  synth->add_option("--out", synth_out, "output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "run the repeated-split experiment for a task");
  RunFlags run_flags;
  run_flags.add_common(run);
  std::string run_out = "run_out";
  bool run_perm = false;
  run->add_option("--out", run_out, "output directory")->required();
  run->add_flag("--perm-importance", run_perm,
                "also export permutation importance for the first repetition");

  // importance
  auto* importance = app.add_subcommand("importance", "relative importance table from a result");
  std::string imp_result, imp_out;
  importance->add_option("--result", imp_result, "result.json from `run`")->required();
  importance->add_option("--out", imp_out, "output CSV path")->required();

  // pdp
  auto* pdp = app.add_subcommand("pdp", "partial dependence curve across repetitions");
  RunFlags pdp_flags;
  pdp_flags.add_common(pdp);
  std::string pdp_feature = "distance_km", pdp_out;
  double grid_min = 0.0, grid_max = 10.0, grid_step = 0.1;
  int target_class = 0;
  bool per_rep = false;
  pdp->add_option("--feature", pdp_feature, "predictor to sweep");
  pdp->add_option("--grid-min", grid_min, "grid start (inclusive)");
  pdp->add_option("--grid-max", grid_max, "grid end (exclusive)");
  pdp->add_option("--grid-step", grid_step, "grid step");
  pdp->add_option("--target-class", target_class, "class id whose probability is averaged");
  pdp->add_flag("--per-rep", per_rep, "include one column per repetition");
  pdp->add_option("--out", pdp_out, "output CSV path")->required();

  // describe
  auto* describe = app.add_subcommand("describe", "descriptive statistics tables");
  std::string desc_data, desc_out = "describe_out";
  double desc_max_km = 10.0, desc_bin_width = 0.5;
  describe->add_option("--data", desc_data, "input dataset CSV")->required();
  describe->add_option("--max-km", desc_max_km, "histogram distance cap (exclusive)");
  describe->add_option("--bin-width", desc_bin_width, "histogram bin width in km");
  describe->add_option("--out", desc_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_config, synth_out, synth, synth_seed);
    if (run->parsed()) return cmd_run(run_flags, run, run_out, run_perm);
    if (importance->parsed()) return cmd_importance(imp_result, imp_out);
    if (pdp->parsed())
      return cmd_pdp(pdp_flags, pdp, pdp_feature, grid_min, grid_max, grid_step, target_class,
                     per_rep, pdp_out);
    if (describe->parsed()) return cmd_describe(desc_data, desc_out, desc_max_km, desc_bin_width);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
