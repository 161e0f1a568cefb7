#include "modechoice/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "modechoice/errors.hpp"
#include "modechoice/rng.hpp"

namespace modechoice {

namespace {

constexpr double kAgeMin = 6.0;
constexpr double kAgeMax = 12.0;

// mean <= 0 degenerates to the constant 0.
long sample_poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> dist(mean);
  return dist(rng);
}

// One draw over group member probabilities; returns the selected member
// index, or the group size when the absorbed reference level is selected.
std::size_t sample_categorical(std::mt19937_64& rng, const std::vector<double>& probs) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size();
}

}  // namespace

SynthConfig::SynthConfig() : targets_(FeatureSchema::canonical().size()) {}

SynthConfig SynthConfig::defaults() {
  SynthConfig cfg;
  cfg.mode_counts_ = {2199, 259, 280, 261};  // walking, cycling, car, public_transport

  // Per-mode target means, ordered (walking, cycling, car, public_transport).
  const std::array<std::array<double, kNumModes>, 20> table = {{
      {0.75, 1.53, 4.08, 3.94},  // distance_km
      {0.99, 0.92, 0.73, 0.75},  // same_municipality
      {0.69, 0.65, 0.65, 0.43},  // urban
      {0.18, 0.20, 0.20, 0.21},  // suburban
      {0.13, 0.15, 0.15, 0.35},  // rural
      {0.15, 0.09, 0.09, 0.05},  // pt_very_good
      {0.18, 0.09, 0.11, 0.07},  // pt_good
      {0.28, 0.29, 0.25, 0.15},  // pt_moderate
      {0.26, 0.28, 0.29, 0.38},  // pt_poor
      {0.13, 0.25, 0.25, 0.34},  // pt_none
      {8.88, 9.81, 8.86, 9.08},  // age_years
      {0.50, 0.55, 0.52, 0.41},  // female
      {0.71, 0.76, 0.69, 0.72},  // swiss
      {0.28, 0.11, 0.52, 0.64},  // french
      {0.02, 0.03, 0.10, 0.05},  // italian
      {4.29, 4.36, 4.15, 4.16},  // household_size
      {1.44, 1.53, 1.67, 1.69},  // n_cars
      {3.86, 4.35, 3.47, 3.80},  // n_bikes
      {0.51, 0.63, 0.58, 0.67},  // home_owner
      {0.22, 0.16, 0.24, 0.19},  // rain
  }};
  for (std::size_t c = 0; c < table.size(); ++c) cfg.targets_[c] = table[c];

  // The published shares of some indicator groups sum to 0.99 after rounding;
  // renormalize so each group is a proper categorical distribution.
  for (const auto& group : cfg.schema().indicator_groups()) {
    if (group.reference_absorbed) continue;
    for (int m = 0; m < kNumModes; ++m) {
      double sum = 0.0;
      for (std::size_t c : group.columns) sum += cfg.targets_[c][m];
      for (std::size_t c : group.columns) cfg.targets_[c][m] /= sum;
    }
  }
  return cfg;
}

std::size_t SynthConfig::total_rows() const {
  std::size_t total = 0;
  for (auto c : mode_counts_) total += c;
  return total;
}

SynthConfig SynthConfig::scaled(std::size_t factor) const {
  SynthConfig cfg = *this;
  for (auto& c : cfg.mode_counts_) c *= factor;
  return cfg;
}

void SynthConfig::validate() const {
  const FeatureSchema& schema = this->schema();
  for (int m = 0; m < kNumModes; ++m) {
    if (mode_counts_[m] == 0) continue;  // targets of an absent mode are not used
    const TravelMode mode = kAllModes[m];
    const std::string mode_name(to_string(mode));
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const Column& col = schema.column(c);
      const double t = targets_[c][m];
      if (!std::isfinite(t))
        throw ConfigError("non-finite target for " + col.name + " / " + mode_name);
      switch (col.kind) {
        case ColumnKind::Binary:
          if (t < 0.0 || t > 1.0)
            throw ConfigError("probability outside [0,1] for " + col.name + " / " + mode_name);
          break;
        case ColumnKind::Count:
        case ColumnKind::Continuous:
          if (t < 0.0)
            throw ConfigError("negative target mean for " + col.name + " / " + mode_name);
          break;
      }
    }
    if (targets_[0][m] <= 0.0)
      throw ConfigError("distance_km target must be positive for " + mode_name);
    const auto age_col = *schema.index_of("age_years");
    if (targets_[age_col][m] < kAgeMin || targets_[age_col][m] > kAgeMax)
      throw ConfigError("age_years target outside [6,12] for " + mode_name);
    const auto hh_col = *schema.index_of("household_size");
    if (targets_[hh_col][m] < 1.0)
      throw ConfigError("household_size target must be >= 1 for " + mode_name);
    for (const auto& group : schema.indicator_groups()) {
      double sum = 0.0;
      for (std::size_t c : group.columns) sum += targets_[c][m];
      if (group.reference_absorbed) {
        if (sum > 1.0 + 1e-9)
          throw ConfigError("indicator group '" + group.name + "' exceeds 1 for " + mode_name);
      } else if (std::abs(sum - 1.0) > 1e-6) {
        throw ConfigError("indicator group '" + group.name + "' does not sum to 1 for " +
                          mode_name);
      }
    }
  }
  if (distance_log_sigma_ <= 0.0) throw ConfigError("distance_log_sigma must be positive");
  if (total_rows() == 0) throw ConfigError("all mode counts are zero");
}

Dataset generate(const SynthConfig& config) {
  config.validate();
  const FeatureSchema& schema = config.schema();
  const std::size_t p = schema.size();

  const auto age_col = *schema.index_of("age_years");
  const auto hh_col = *schema.index_of("household_size");
  const auto& groups = schema.indicator_groups();

  // Columns drawn as part of an indicator group are skipped by the plain
  // per-column pass.
  std::vector<bool> in_group(p, false);
  for (const auto& g : groups)
    for (std::size_t c : g.columns) in_group[c] = true;

  std::vector<double> values;
  values.reserve(config.total_rows() * p);
  std::vector<TravelMode> labels;
  labels.reserve(config.total_rows());

  for (int m = 0; m < kNumModes; ++m) {
    const TravelMode mode = kAllModes[m];
    const std::size_t count = config.mode_count(mode);
    if (count == 0) continue;

    auto rng = make_stream(config.seed(), {kStreamSynth, static_cast<std::uint64_t>(m)});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> age_window(-2, 2);

    const double sigma = config.distance_log_sigma();
    const double mu = std::log(config.target(0, mode)) - 0.5 * sigma * sigma;
    std::lognormal_distribution<double> distance(mu, sigma);

    std::vector<std::vector<double>> group_probs;
    for (const auto& g : groups) {
      std::vector<double> probs;
      for (std::size_t c : g.columns) probs.push_back(config.target(c, mode));
      group_probs.push_back(std::move(probs));
    }

    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> row(p, 0.0);
      row[0] = distance(rng);
      for (std::size_t c = 1; c < p; ++c) {
        if (in_group[c]) continue;
        const Column& col = schema.column(c);
        const double target = config.target(c, mode);
        if (col.kind == ColumnKind::Binary) {
          row[c] = unit(rng) < target ? 1.0 : 0.0;
        } else if (c == age_col) {
          const double base = std::floor(target) + (unit(rng) < (target - std::floor(target)));
          double age = base + age_window(rng);
          age = std::min(kAgeMax, std::max(kAgeMin, age));
          row[c] = age;
        } else if (c == hh_col) {
          row[c] = 1.0 + static_cast<double>(sample_poisson(rng, target - 1.0));
        } else {
          row[c] = static_cast<double>(sample_poisson(rng, target));
        }
      }
      // Indicator groups: one categorical draw each, at the group's position.
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const std::size_t pick = sample_categorical(rng, group_probs[g]);
        if (pick < groups[g].columns.size()) row[groups[g].columns[pick]] = 1.0;
        // pick == size means the absorbed reference level: all members stay 0.
      }
      values.insert(values.end(), row.begin(), row.end());
      labels.push_back(mode);
    }
  }
  return Dataset(schema, std::move(values), std::move(labels));
}

std::vector<CalibrationCell> calibration_report(const Dataset& data, const SynthConfig& config,
                                                double tolerance) {
  if (data.schema().fingerprint() != config.schema().fingerprint())
    throw SchemaError("dataset schema does not match the generator schema");

  const std::size_t p = data.n_features();
  std::array<std::vector<double>, kNumModes> sums;
  for (auto& s : sums) s.assign(p, 0.0);
  std::array<std::size_t, kNumModes> counts{};
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    const int m = mode_index(data.labels()[r]);
    ++counts[m];
    for (std::size_t c = 0; c < p; ++c) sums[m][c] += data.at(r, c);
  }

  std::vector<CalibrationCell> cells;
  for (int m = 0; m < kNumModes; ++m) {
    if (counts[m] == 0) continue;
    for (std::size_t c = 0; c < p; ++c) {
      CalibrationCell cell;
      cell.column = data.schema().column(c).name;
      cell.mode = kAllModes[m];
      cell.target = config.target(c, kAllModes[m]);
      cell.sample_mean = sums[m][c] / static_cast<double>(counts[m]);
      cell.abs_deviation = std::abs(cell.sample_mean - cell.target);
      cell.flagged = cell.abs_deviation > tolerance;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string SynthConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed_;
  j["distance_log_sigma"] = distance_log_sigma_;
  for (TravelMode mode : kAllModes)
    j["mode_counts"][std::string(to_string(mode))] = mode_count(mode);
  const FeatureSchema& s = schema();
  for (std::size_t c = 0; c < s.size(); ++c)
    for (TravelMode mode : kAllModes)
      j["targets"][s.column(c).name][std::string(to_string(mode))] = target(c, mode);
  return j.dump(2);
}

SynthConfig SynthConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid config JSON: " + std::string(e.what()));
  }

  // Partial configs are allowed: unspecified values keep the defaults.
  SynthConfig cfg = defaults();
  try {
    for (auto& [key, value] : j.items()) {
      if (key == "seed") {
        cfg.seed_ = value.get<std::uint64_t>();
      } else if (key == "distance_log_sigma") {
        cfg.distance_log_sigma_ = value.get<double>();
      } else if (key == "mode_counts") {
        for (auto& [mode_name, count] : value.items()) {
          auto mode = parse_mode(mode_name);
          if (!mode) throw ConfigError("unknown mode in config: " + mode_name);
          cfg.set_mode_count(*mode, count.get<std::size_t>());
        }
      } else if (key == "targets") {
        for (auto& [col_name, per_mode] : value.items()) {
          auto col = cfg.schema().index_of(col_name);
          if (!col) throw ConfigError("unknown column in config: " + col_name);
          for (auto& [mode_name, target] : per_mode.items()) {
            auto mode = parse_mode(mode_name);
            if (!mode) throw ConfigError("unknown mode in config: " + mode_name);
            cfg.set_target(*col, *mode, target.get<double>());
          }
        }
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid config value: " + std::string(e.what()));
  }
  cfg.validate();
  return cfg;
}

}  // namespace modechoice
