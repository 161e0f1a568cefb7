#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "modechoice/schema.hpp"
#include "modechoice/travel_mode.hpp"

namespace modechoice {

// Row-major numeric feature matrix with typed column metadata and one travel
// mode label per row. Immutable after construction; construction validates
// every cell against the schema (no missing values, binaries in {0,1},
// non-negative integer counts, non-negative distances, indicator-group
// exclusivity), so downstream code can assume clean data.
class Dataset {
 public:
  Dataset(FeatureSchema schema, std::vector<double> values, std::vector<TravelMode> labels);

  std::size_t n_rows() const { return labels_.size(); }
  std::size_t n_features() const { return schema_.size(); }

  double at(std::size_t row, std::size_t col) const { return values_[row * schema_.size() + col]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * schema_.size(), schema_.size()};
  }
  const std::vector<double>& values() const { return values_; }

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<TravelMode>& labels() const { return labels_; }

  // Copies the given rows in the given order (duplicates allowed).
  Dataset select_rows(std::span<const std::size_t> rows) const;

  std::array<std::size_t, kNumModes> mode_counts() const;

  bool operator==(const Dataset& other) const;

 private:
  void validate() const;

  FeatureSchema schema_;
  std::vector<double> values_;
  std::vector<TravelMode> labels_;
};

}  // namespace modechoice
