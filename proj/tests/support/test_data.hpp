// Shared helpers for building small valid datasets in tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "modechoice/dataset.hpp"
#include "modechoice/synth.hpp"

namespace testdata {

// One valid canonical-schema row; callers override individual columns.
struct RowSpec {
  double distance_km = 0.5;
  double same_municipality = 1;
  double urban = 1, suburban = 0, rural = 0;
  double pt_very_good = 0, pt_good = 0, pt_moderate = 0, pt_poor = 0, pt_none = 1;
  double age_years = 8;
  double female = 0;
  double swiss = 1;
  double french = 0, italian = 0;
  double household_size = 4;
  double n_cars = 1;
  double n_bikes = 2;
  double home_owner = 0;
  double rain = 0;
  modechoice::TravelMode mode = modechoice::TravelMode::Walking;

  std::vector<double> values() const {
    return {distance_km, same_municipality, urban,      suburban,       rural,
            pt_very_good, pt_good,          pt_moderate, pt_poor,        pt_none,
            age_years,    female,           swiss,      french,         italian,
            household_size, n_cars,         n_bikes,    home_owner,     rain};
  }
};

inline modechoice::Dataset make_dataset(const std::vector<RowSpec>& rows) {
  std::vector<double> values;
  std::vector<modechoice::TravelMode> labels;
  for (const auto& row : rows) {
    const auto v = row.values();
    values.insert(values.end(), v.begin(), v.end());
    labels.push_back(row.mode);
  }
  return modechoice::Dataset(modechoice::FeatureSchema::canonical(), std::move(values),
                             std::move(labels));
}

// The default synthetic dataset, generated once per process.
inline const modechoice::Dataset& default_synthetic() {
  static const modechoice::Dataset data = modechoice::generate(modechoice::SynthConfig::defaults());
  return data;
}

// A small random table for property tests: values drawn from a few distinct
// levels so ties and repeated values are exercised.
struct RandomTable {
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;

  modechoice::DataView view() const { return {values.data(), n_rows, n_cols}; }
};

inline RandomTable random_table(std::mt19937_64& rng, std::size_t max_rows, std::size_t max_cols,
                                int n_classes) {
  std::uniform_int_distribution<std::size_t> rows_dist(2, max_rows);
  std::uniform_int_distribution<std::size_t> cols_dist(1, max_cols);
  RandomTable table;
  table.n_rows = rows_dist(rng);
  table.n_cols = cols_dist(rng);
  std::uniform_int_distribution<int> level(0, 5);
  std::uniform_int_distribution<int> label(0, n_classes - 1);
  for (std::size_t r = 0; r < table.n_rows; ++r) {
    for (std::size_t c = 0; c < table.n_cols; ++c)
      table.values.push_back(0.5 * level(rng));
    table.labels.push_back(label(rng));
  }
  return table;
}

}  // namespace testdata
