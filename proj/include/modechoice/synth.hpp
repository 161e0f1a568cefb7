#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "modechoice/dataset.hpp"

namespace modechoice {

// Per-(column, mode) calibration targets for the synthetic population, plus
// per-mode row counts and the master seed. Targets are interpreted by column
// kind:
//   continuous (distance_km)  target mean of a per-mode log-normal whose
//                             log-space scale is distance_log_sigma; the
//                             location is set so the distribution mean equals
//                             the target. Spread is a modeling choice, not a
//                             calibrated quantity.
//   binary                    Bernoulli probability; indicator-group members
//                             are drawn with a single categorical draw per
//                             group and must sum to 1 per mode (language is
//                             the exception: french + italian <= 1, the
//                             remainder is the german reference level).
//   count                     target mean. age_years is uniform over a 5-wide
//                             integer window whose center is the
//                             Bernoulli-rounded target (exact mean, support
//                             within [6, 12]); household_size is
//                             1 + Poisson(mean - 1); other counts are
//                             Poisson(mean). All are mean-exact.
class SynthConfig {
 public:
  // Built-in calibration profile for Swiss school-journey travel modes
  // (per-mode means and class counts 2199/259/280/261).
  static SynthConfig defaults();

  static SynthConfig from_json_file(const std::string& path);
  std::string to_json() const;

  // Throws ConfigError before any sampling if invalid.
  void validate() const;

  std::size_t mode_count(TravelMode mode) const { return mode_counts_[mode_index(mode)]; }
  void set_mode_count(TravelMode mode, std::size_t count) {
    mode_counts_[mode_index(mode)] = count;
  }
  std::size_t total_rows() const;

  double target(std::size_t column, TravelMode mode) const {
    return targets_[column][mode_index(mode)];
  }
  void set_target(std::size_t column, TravelMode mode, double value) {
    targets_[column][mode_index(mode)] = value;
  }

  double distance_log_sigma() const { return distance_log_sigma_; }
  void set_distance_log_sigma(double sigma) { distance_log_sigma_ = sigma; }

  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  // Multiplies every mode count by `factor`.
  SynthConfig scaled(std::size_t factor) const;

  const FeatureSchema& schema() const { return FeatureSchema::canonical(); }

 private:
  SynthConfig();

  std::array<std::size_t, kNumModes> mode_counts_{};
  std::vector<std::array<double, kNumModes>> targets_;  // [column][mode]
  double distance_log_sigma_ = 0.9;
  std::uint64_t seed_ = 42;
};

// Deterministic for a fixed seed; per-mode sample means converge to the
// configured targets as counts grow. Modes are sampled from independent
// substreams keyed by (seed, mode index), so the result does not depend on
// sampling order.
Dataset generate(const SynthConfig& config);

struct CalibrationCell {
  std::string column;
  TravelMode mode;
  double target = 0.0;
  double sample_mean = 0.0;
  double abs_deviation = 0.0;
  bool flagged = false;  // abs_deviation > tolerance
};

// |sample mean - target| per (mode, column) over the modes present in the
// config. Throws SchemaError if the data does not use the config's schema.
std::vector<CalibrationCell> calibration_report(const Dataset& data, const SynthConfig& config,
                                                double tolerance);

}  // namespace modechoice
