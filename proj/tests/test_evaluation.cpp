#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "modechoice/errors.hpp"
#include "modechoice/evaluation.hpp"
#include "modechoice/rng.hpp"
#include "support/temp_files.hpp"
#include "support/test_data.hpp"

using namespace modechoice;
using testdata::RowSpec;

namespace {

// A T1-separable toy: short walking trips vs long car trips.
Dataset separable_toy(std::size_t per_class) {
  std::vector<RowSpec> rows;
  for (std::size_t i = 0; i < per_class; ++i) {
    RowSpec active;
    active.distance_km = 0.2 + 0.01 * static_cast<double>(i);
    active.mode = TravelMode::Walking;
    rows.push_back(active);
    RowSpec driven;
    driven.distance_km = 5.0 + 0.01 * static_cast<double>(i);
    driven.mode = TravelMode::Car;
    driven.same_municipality = 0;
    rows.push_back(driven);
  }
  return testdata::make_dataset(rows);
}

std::multiset<std::vector<double>> row_multiset(const Dataset& data) {
  std::multiset<std::vector<double>> rows;
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    std::vector<double> row(data.row(r).begin(), data.row(r).end());
    row.push_back(static_cast<double>(mode_index(data.labels()[r])));
    rows.insert(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("task registry encodes the six tasks") {
  const TaskSpec& t1 = task_by_id("T1");
  CHECK(t1.class_of(TravelMode::Walking) == 0);
  CHECK(t1.class_of(TravelMode::Cycling) == 0);
  CHECK(t1.class_of(TravelMode::Car) == 1);
  CHECK(t1.class_of(TravelMode::PublicTransport) == 1);
  CHECK(t1.excluded_features.empty());

  const TaskSpec& t2 = task_by_id("T2");
  CHECK(t2.class_of(TravelMode::Car) == 0);
  CHECK(t2.class_of(TravelMode::Walking) == 1);

  const TaskSpec& t3 = task_by_id("T3");
  CHECK(t3.class_for == t2.class_for);
  CHECK(t3.excluded_features == std::vector<std::string>{"distance_km"});

  const TaskSpec& t4 = task_by_id("T4");
  CHECK(t4.n_classes == 4);
  for (TravelMode mode : kAllModes) CHECK(t4.class_of(mode) == mode_index(mode));

  const TaskSpec& t5 = task_by_id("T5");
  CHECK(t5.class_of(TravelMode::Walking) == 0);
  CHECK(t5.class_of(TravelMode::Cycling) == 1);

  const TaskSpec& t6 = task_by_id("T6");
  CHECK(t6.class_of(TravelMode::Walking) == -1);
  CHECK(t6.class_of(TravelMode::Cycling) == -1);
  CHECK(t6.class_of(TravelMode::Car) == 0);
  CHECK(t6.class_of(TravelMode::PublicTransport) == 1);

  CHECK_THROWS_AS(task_by_id("T7"), ConfigError);
  CHECK(task_ids().size() == 6);
}

TEST_CASE("balance downsamples every task class to the minority count") {
  const Dataset& data = testdata::default_synthetic();
  SUBCASE("T1: non-active minority 541") {
    auto rng = make_stream(1, {kStreamRepetition, 0});
    const Dataset balanced = balance(data, task_by_id("T1"), rng);
    CHECK(balanced.n_rows() == 1082);
    const auto counts = balanced.mode_counts();
    CHECK(counts[mode_index(TravelMode::Walking)] + counts[mode_index(TravelMode::Cycling)] == 541);
    CHECK(counts[mode_index(TravelMode::Car)] + counts[mode_index(TravelMode::PublicTransport)] ==
          541);
  }
  SUBCASE("T4: every class at the cycling count 259") {
    auto rng = make_stream(1, {kStreamRepetition, 1});
    const Dataset balanced = balance(data, task_by_id("T4"), rng);
    CHECK(balanced.n_rows() == 259 * 4);
    for (std::size_t count : balanced.mode_counts()) CHECK(count == 259);
  }
  SUBCASE("T6 keeps only car and public transport rows") {
    auto rng = make_stream(1, {kStreamRepetition, 2});
    const Dataset balanced = balance(data, task_by_id("T6"), rng);
    CHECK(balanced.n_rows() == 2 * 261);
    const auto counts = balanced.mode_counts();
    CHECK(counts[mode_index(TravelMode::Walking)] == 0);
    CHECK(counts[mode_index(TravelMode::Cycling)] == 0);
    CHECK(counts[mode_index(TravelMode::Car)] == 261);
    CHECK(counts[mode_index(TravelMode::PublicTransport)] == 261);
  }
  SUBCASE("already balanced data keeps its per-class counts") {
    const Dataset toy = separable_toy(8);
    auto rng = make_stream(1, {kStreamRepetition, 3});
    const Dataset balanced = balance(toy, task_by_id("T1"), rng);
    CHECK(balanced.n_rows() == 16);
    CHECK(balanced.mode_counts()[mode_index(TravelMode::Walking)] == 8);
  }
  SUBCASE("every balanced row exists in the input") {
    const Dataset toy = separable_toy(10);
    auto rng = make_stream(1, {kStreamRepetition, 4});
    const Dataset balanced = balance(toy, task_by_id("T1"), rng);
    auto input_rows = row_multiset(toy);
    for (std::size_t r = 0; r < balanced.n_rows(); ++r) {
      std::vector<double> row(balanced.row(r).begin(), balanced.row(r).end());
      row.push_back(static_cast<double>(mode_index(balanced.labels()[r])));
      auto it = input_rows.find(row);
      REQUIRE(it != input_rows.end());
      input_rows.erase(it);  // consume: no duplication beyond the input's
    }
  }
  SUBCASE("an empty class is an error naming the class") {
    std::vector<RowSpec> rows;
    for (int i = 0; i < 4; ++i) {
      RowSpec walk;
      walk.mode = TravelMode::Walking;
      rows.push_back(walk);
    }
    const Dataset walking_only = testdata::make_dataset(rows);
    auto rng = make_stream(1, {kStreamRepetition, 5});
    CHECK_THROWS_WITH_AS(balance(walking_only, task_by_id("T1"), rng),
                         doctest::Contains("non_active"), ValidationError);
  }
}

TEST_CASE("train_test_split partitions the rows") {
  SUBCASE("4 rows at 0.75 give 3 train, 1 test") {
    const Dataset toy = separable_toy(2);
    auto rng = make_stream(2, {kStreamRepetition, 0});
    const auto [train, test] = train_test_split(toy, 0.75, rng);
    CHECK(train.n_rows() == 3);
    CHECK(test.n_rows() == 1);
  }
  SUBCASE("partition property over random sizes and fractions") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<std::size_t> size_dist(2, 20);
      const Dataset data = separable_toy(size_dist(rng));
      const double fraction = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
      auto split_rng = make_stream(trial, {kStreamRepetition, 0});
      try {
        const auto [train, test] = train_test_split(data, fraction, split_rng);
        CHECK(train.n_rows() + test.n_rows() == data.n_rows());
        auto combined = row_multiset(train);
        for (const auto& row : row_multiset(test)) combined.insert(row);
        CHECK(combined == row_multiset(data));
      } catch (const ValidationError&) {
        // acceptable only when rounding would empty one side
        const double n_train =
            std::floor(fraction * static_cast<double>(data.n_rows()) + 0.5);
        CHECK((n_train == 0.0 || n_train == static_cast<double>(data.n_rows())));
      }
    }
  }
  SUBCASE("same seed gives the identical partition") {
    const Dataset data = separable_toy(12);
    auto rng1 = make_stream(3, {kStreamRepetition, 1});
    auto rng2 = make_stream(3, {kStreamRepetition, 1});
    const auto [train1, test1] = train_test_split(data, 0.75, rng1);
    const auto [train2, test2] = train_test_split(data, 0.75, rng2);
    CHECK(train1 == train2);
    CHECK(test1 == test2);
  }
  SUBCASE("empty side is an error") {
    const Dataset data = separable_toy(1);  // 2 rows
    auto rng = make_stream(4, {kStreamRepetition, 0});
    CHECK_THROWS_AS(train_test_split(data, 0.1, rng), ValidationError);
  }
}

TEST_CASE("summarize_interval") {
  SUBCASE("constant vector has zero width") {
    const std::vector<double> values(10, 0.8);
    const auto s = summarize_interval(values);
    CHECK(s.normal_approx.mean == 0.8);
    CHECK(s.normal_approx.lower == 0.8);
    CHECK(s.normal_approx.upper == 0.8);
    CHECK(s.percentile.lower == 0.8);
    CHECK(s.percentile.upper == 0.8);
  }
  SUBCASE("hand-computed normal approximation") {
    // mean 0.8, sd 0.1, se 0.057735; 1.96*se = 0.113162.
    const std::vector<double> values = {0.7, 0.8, 0.9};
    const auto s = summarize_interval(values);
    CHECK(s.normal_approx.mean == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(s.normal_approx.lower == doctest::Approx(0.6868).epsilon(1e-4));
    CHECK(s.normal_approx.upper == doctest::Approx(0.9132).epsilon(1e-4));
    CHECK(s.normal_approx.method == kMethodNormalApprox);
    CHECK(s.percentile.method == kMethodPercentile);
  }
  SUBCASE("percentile interpolation over 1..100") {
    std::vector<double> values;
    for (int i = 1; i <= 100; ++i) values.push_back(static_cast<double>(i));
    const auto s = summarize_interval(values);
    CHECK(s.percentile.lower == doctest::Approx(3.475).epsilon(1e-12));
    CHECK(s.percentile.upper == doctest::Approx(97.525).epsilon(1e-12));
  }
  SUBCASE("fewer than two values is an error") {
    CHECK_THROWS_AS(summarize_interval(std::vector<double>{0.5}), std::invalid_argument);
  }
}

TEST_CASE("run_experiment on a separable toy reaches accuracy 1") {
  const Dataset toy = separable_toy(20);
  ExperimentConfig config;
  config.task = task_by_id("T1");
  config.repetitions = 1;
  config.forest.n_trees = 15;
  config.seed = 7;
  const auto result = run_experiment(toy, config);
  REQUIRE(result.overall_accuracy.size() == 1);
  CHECK(result.overall_accuracy[0] == 1.0);
  CHECK(result.per_class_accuracy[0][0] == 1.0);
  CHECK(result.per_class_accuracy[0][1] == 1.0);
}

TEST_CASE("run_experiment is deterministic and thread-count independent") {
  const Dataset& data = testdata::default_synthetic();
  ExperimentConfig config;
  config.task = task_by_id("T6");
  config.repetitions = 4;
  config.forest.n_trees = 15;
  config.seed = 99;
  const auto a = run_experiment(data, config, 1);
  const auto b = run_experiment(data, config, 2);
  CHECK(a.overall_accuracy == b.overall_accuracy);
  CHECK(a.per_class_accuracy == b.per_class_accuracy);
  CHECK(a.mdg == b.mdg);
  CHECK(result_to_json(a) == result_to_json(b));
}

TEST_CASE("run_experiment records per-class structure and the accuracy identity") {
  const Dataset& data = testdata::default_synthetic();
  ExperimentConfig config;
  config.task = task_by_id("T6");
  config.repetitions = 5;
  config.forest.n_trees = 20;
  config.seed = 3;
  const auto result = run_experiment(data, config, 2);

  CHECK(result.class_names == std::vector<std::string>{"car", "public_transport"});
  CHECK(result.feature_names.size() == 20);
  for (std::size_t r = 0; r < result.repetitions; ++r) {
    // T6 test rows: a quarter of the 522 balanced car/pt rows.
    std::size_t n_test = 0;
    double weighted = 0.0;
    for (std::size_t c = 0; c < result.class_names.size(); ++c) {
      n_test += result.test_class_counts[r][c];
      weighted += static_cast<double>(result.test_class_counts[r][c]) *
                  result.per_class_accuracy[r][c];
    }
    CHECK(n_test == 130);  // 522 balanced car/pt rows, round-half-up(0.75*522) = 392 train
    weighted /= static_cast<double>(n_test);
    CHECK(std::abs(weighted - result.overall_accuracy[r]) <= 1e-12);
    for (double acc : result.per_class_accuracy[r]) {
      CHECK(acc >= 0.0);
      CHECK(acc <= 1.0);
    }
  }
}

TEST_CASE("run_experiment propagates repetition-tagged errors") {
  // T1 on walking-only data fails inside every repetition at balance time.
  std::vector<RowSpec> rows(6);
  const Dataset walking_only = testdata::make_dataset(rows);
  ExperimentConfig config;
  config.task = task_by_id("T1");
  config.repetitions = 2;
  config.forest.n_trees = 3;
  try {
    run_experiment(walking_only, config);
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("repetition") != std::string::npos);
  }
}

TEST_CASE("mean accuracy is stable across master seeds") {
  const Dataset& data = testdata::default_synthetic();
  ExperimentConfig config;
  config.task = task_by_id("T1");
  config.repetitions = 8;
  config.forest.n_trees = 60;
  config.seed = 42;
  const auto a = run_experiment(data, config, 2);
  config.seed = 1234;
  const auto b = run_experiment(data, config, 2);
  CHECK(std::abs(a.overall_summary.normal_approx.mean - b.overall_summary.normal_approx.mean) <
        0.05);
}

TEST_CASE("result JSON and summary CSV round trip") {
  testdata::TempDir tmp("eval_io");
  const Dataset toy = separable_toy(16);
  ExperimentConfig config;
  config.task = task_by_id("T1");
  config.repetitions = 3;
  config.forest.n_trees = 9;
  config.seed = 21;
  const auto result = run_experiment(toy, config);

  const auto path = tmp.write("result.json", result_to_json(result));
  const auto loaded = result_from_json_file(path);
  CHECK(loaded.task_id == result.task_id);
  CHECK(loaded.overall_accuracy == result.overall_accuracy);
  CHECK(loaded.per_class_accuracy == result.per_class_accuracy);
  CHECK(loaded.mdg == result.mdg);
  CHECK(loaded.test_class_counts == result.test_class_counts);
  CHECK(result_to_json(loaded) == result_to_json(result));

  const auto csv_path = tmp.path("summary.csv");
  write_summary_csv(result, csv_path);
  const auto text = testdata::TempDir::slurp(csv_path);
  CHECK(text.find("task,class,mean,lower,upper,method") == 0);
  CHECK(text.find("T1,overall,1.0000") != std::string::npos);
  CHECK(text.find("T1,active,") != std::string::npos);
  CHECK(text.find("T1,non_active,") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3 rows
}
