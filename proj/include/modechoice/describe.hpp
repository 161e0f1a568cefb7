#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "modechoice/dataset.hpp"

namespace modechoice {

// Per-mode and overall column means. A mode with no rows has count 0 and its
// means are absent, not zero.
struct DescriptiveSummary {
  std::array<std::size_t, kNumModes> counts{};
  std::array<std::vector<double>, kNumModes> per_mode_means;  // empty when count == 0
  std::vector<double> overall_means;

  std::optional<double> mode_mean(TravelMode mode, std::size_t col) const {
    const auto& means = per_mode_means[mode_index(mode)];
    if (means.empty()) return std::nullopt;
    return means[col];
  }
};

DescriptiveSummary describe(const Dataset& data);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<double> values;  // row-major, names.size() x names.size()

  double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
};

// Pearson correlations over the selected columns. Requires >= 2 rows; a
// selected column with zero variance is an error naming the column.
CorrelationMatrix correlation_matrix(const Dataset& data, const std::vector<std::string>& columns);

struct DistanceHistogram {
  double bin_width_km = 0.0;
  double max_km = 0.0;
  // counts[mode][bin]; rows with distance >= max_km are excluded.
  std::array<std::vector<std::size_t>, kNumModes> counts;

  std::size_t n_bins() const { return counts[0].size(); }
};

DistanceHistogram distance_histogram(const Dataset& data, double max_km, double bin_width_km);

}  // namespace modechoice
