#include <doctest.h>

#include <cmath>

#include "modechoice/errors.hpp"
#include "modechoice/synth.hpp"
#include "support/temp_files.hpp"
#include "support/test_data.hpp"

using namespace modechoice;

TEST_CASE("default config generates the calibrated class structure") {
  const Dataset& data = testdata::default_synthetic();
  CHECK(data.n_rows() == 2999);
  const auto counts = data.mode_counts();
  CHECK(counts[mode_index(TravelMode::Car)] == 280);
  CHECK(counts[mode_index(TravelMode::PublicTransport)] == 261);
  CHECK(counts[mode_index(TravelMode::Cycling)] == 259);
  CHECK(counts[mode_index(TravelMode::Walking)] == 2199);
}

TEST_CASE("generation is deterministic per seed and sensitive to it") {
  SynthConfig config = SynthConfig::defaults();
  config.set_seed(42);
  const Dataset a = generate(config);
  const Dataset b = generate(config);
  CHECK(a == b);

  config.set_seed(43);
  const Dataset c = generate(config);
  CHECK_FALSE(a == c);
}

TEST_CASE("a mode with count zero is absent from the output") {
  SynthConfig config = SynthConfig::defaults();
  config.set_mode_count(TravelMode::Cycling, 0);
  const Dataset data = generate(config);
  CHECK(data.n_rows() == 2999 - 259);
  CHECK(data.mode_counts()[mode_index(TravelMode::Cycling)] == 0);
}

TEST_CASE("invalid configs fail before sampling") {
  SUBCASE("probability outside [0,1]") {
    SynthConfig config = SynthConfig::defaults();
    config.set_target(*config.schema().index_of("rain"), TravelMode::Car, 1.2);
    CHECK_THROWS_AS(generate(config), ConfigError);
  }
  SUBCASE("negative count mean") {
    SynthConfig config = SynthConfig::defaults();
    config.set_target(*config.schema().index_of("n_bikes"), TravelMode::Walking, -0.5);
    CHECK_THROWS_AS(generate(config), ConfigError);
  }
  SUBCASE("indicator group not summing to 1") {
    SynthConfig config = SynthConfig::defaults();
    config.set_target(*config.schema().index_of("urban"), TravelMode::Walking, 0.2);
    CHECK_THROWS_AS(generate(config), ConfigError);
  }
  SUBCASE("language shares exceeding 1") {
    SynthConfig config = SynthConfig::defaults();
    config.set_target(*config.schema().index_of("french"), TravelMode::Car, 0.95);
    config.set_target(*config.schema().index_of("italian"), TravelMode::Car, 0.2);
    CHECK_THROWS_AS(generate(config), ConfigError);
  }
  SUBCASE("all mode counts zero") {
    SynthConfig config = SynthConfig::defaults();
    for (TravelMode mode : kAllModes) config.set_mode_count(mode, 0);
    CHECK_THROWS_AS(generate(config), ConfigError);
  }
}

TEST_CASE("generated rows satisfy the schema invariants") {
  const Dataset& data = testdata::default_synthetic();
  const auto age_col = *data.schema().index_of("age_years");
  const auto hh_col = *data.schema().index_of("household_size");
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    CHECK(data.at(r, 0) > 0.0);  // distances strictly positive
    CHECK(data.at(r, age_col) >= 6.0);
    CHECK(data.at(r, age_col) <= 12.0);
    CHECK(data.at(r, hh_col) >= 1.0);
  }
  // Indicator exclusivity is already enforced by the Dataset constructor;
  // spot-check one group anyway.
  for (std::size_t r = 0; r < data.n_rows(); r += 97) {
    const double sum = data.at(r, 2) + data.at(r, 3) + data.at(r, 4);
    CHECK(sum == 1.0);
  }
}

TEST_CASE("walking distance mean converges to the target at 10x scale") {
  SynthConfig config = SynthConfig::defaults().scaled(10);
  config.set_seed(42);
  const Dataset data = generate(config);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    if (data.labels()[r] == TravelMode::Walking) {
      sum += data.at(r, 0);
      ++count;
    }
  }
  CHECK(count == 21990);
  CHECK(sum / static_cast<double>(count) == doctest::Approx(0.75).epsilon(0.0667));  // +-0.05
}

TEST_CASE("calibration report") {
  SUBCASE("repeat generation yields an identical report") {
    const SynthConfig config = SynthConfig::defaults();
    const auto report_a = calibration_report(generate(config), config, 0.06);
    const auto report_b = calibration_report(generate(config), config, 0.06);
    REQUIRE(report_a.size() == report_b.size());
    for (std::size_t i = 0; i < report_a.size(); ++i) {
      CHECK(report_a[i].sample_mean == report_b[i].sample_mean);
      CHECK(report_a[i].abs_deviation == report_b[i].abs_deviation);
    }
  }
  SUBCASE("a handcrafted dataset equal to its targets has zero deviations") {
    SynthConfig config = SynthConfig::defaults();
    for (TravelMode mode : kAllModes) config.set_mode_count(mode, 0);
    config.set_mode_count(TravelMode::Walking, 2);
    // Two walking rows whose means are representable exactly.
    const auto idx = [&](const char* name) { return *config.schema().index_of(name); };
    config.set_target(idx("distance_km"), TravelMode::Walking, 0.75);
    config.set_target(idx("same_municipality"), TravelMode::Walking, 1.0);
    config.set_target(idx("urban"), TravelMode::Walking, 0.5);
    config.set_target(idx("suburban"), TravelMode::Walking, 0.5);
    config.set_target(idx("rural"), TravelMode::Walking, 0.0);
    config.set_target(idx("pt_very_good"), TravelMode::Walking, 0.0);
    config.set_target(idx("pt_good"), TravelMode::Walking, 0.0);
    config.set_target(idx("pt_moderate"), TravelMode::Walking, 0.0);
    config.set_target(idx("pt_poor"), TravelMode::Walking, 0.5);
    config.set_target(idx("pt_none"), TravelMode::Walking, 0.5);
    config.set_target(idx("age_years"), TravelMode::Walking, 8.5);
    config.set_target(idx("female"), TravelMode::Walking, 0.5);
    config.set_target(idx("swiss"), TravelMode::Walking, 1.0);
    config.set_target(idx("french"), TravelMode::Walking, 0.5);
    config.set_target(idx("italian"), TravelMode::Walking, 0.0);
    config.set_target(idx("household_size"), TravelMode::Walking, 4.0);
    config.set_target(idx("n_cars"), TravelMode::Walking, 1.0);
    config.set_target(idx("n_bikes"), TravelMode::Walking, 2.5);
    config.set_target(idx("home_owner"), TravelMode::Walking, 0.5);
    config.set_target(idx("rain"), TravelMode::Walking, 0.0);

    testdata::RowSpec row_a;
    row_a.distance_km = 0.5;
    row_a.same_municipality = 1;
    row_a.urban = 1; row_a.suburban = 0;
    row_a.pt_none = 0; row_a.pt_poor = 1;
    row_a.age_years = 8;
    row_a.female = 0;
    row_a.swiss = 1;
    row_a.french = 1;
    row_a.household_size = 4;
    row_a.n_cars = 1;
    row_a.n_bikes = 2;
    row_a.home_owner = 1;

    testdata::RowSpec row_b;
    row_b.distance_km = 1.0;
    row_b.same_municipality = 1;
    row_b.urban = 0; row_b.suburban = 1;
    row_b.pt_none = 1;
    row_b.age_years = 9;
    row_b.female = 1;
    row_b.swiss = 1;
    row_b.french = 0;
    row_b.household_size = 4;
    row_b.n_cars = 1;
    row_b.n_bikes = 3;
    row_b.home_owner = 0;

    const Dataset data = testdata::make_dataset({row_a, row_b});
    const auto report = calibration_report(data, config, 1e-12);
    CHECK(report.size() == 20);
    for (const auto& cell : report) {
      CAPTURE(cell.column);
      CHECK(cell.abs_deviation == 0.0);
      CHECK_FALSE(cell.flagged);
    }
  }
  SUBCASE("default config: binary-column deviations stay under 0.06") {
    const SynthConfig config = SynthConfig::defaults();
    const auto report = calibration_report(testdata::default_synthetic(), config, 0.06);
    std::size_t binary_cells = 0;
    for (const auto& cell : report) {
      const auto col = *config.schema().index_of(cell.column);
      if (config.schema().column(col).kind != ColumnKind::Binary) continue;
      ++binary_cells;
      CAPTURE(cell.column);
      CAPTURE(to_string(cell.mode));
      CHECK(cell.abs_deviation < 0.06);
    }
    CHECK(binary_cells == 16 * 4);
  }
  SUBCASE("schema mismatch is rejected") {
    const SynthConfig config = SynthConfig::defaults();
    std::vector<Column> cols = {{"x", ColumnKind::Continuous, ""}};
    const Dataset other(FeatureSchema(std::move(cols)), {1.0}, {TravelMode::Walking});
    CHECK_THROWS_AS(calibration_report(other, config, 0.1), SchemaError);
  }
}

TEST_CASE("config JSON round trip preserves targets and counts") {
  testdata::TempDir tmp("synth_json");
  SynthConfig config = SynthConfig::defaults();
  config.set_seed(123);
  config.set_mode_count(TravelMode::Car, 50);
  const auto path = tmp.write("config.json", config.to_json());
  const SynthConfig loaded = SynthConfig::from_json_file(path);
  CHECK(loaded.seed() == 123);
  CHECK(loaded.mode_count(TravelMode::Car) == 50);
  CHECK(loaded.target(0, TravelMode::Walking) == config.target(0, TravelMode::Walking));
  CHECK(generate(loaded) == generate(config));

  const auto bad = tmp.write("bad.json", "{\"targets\": {\"no_such_column\": {\"car\": 1}}}");
  CHECK_THROWS_AS(SynthConfig::from_json_file(bad), ConfigError);
  const auto typo = tmp.write("typo.json", "{\"sead\": 3}");
  CHECK_THROWS_AS(SynthConfig::from_json_file(typo), ConfigError);
}
