#include "modechoice/describe.hpp"

#include <cmath>

#include "modechoice/errors.hpp"

namespace modechoice {

DescriptiveSummary describe(const Dataset& data) {
  if (data.n_rows() == 0) throw ValidationError("describe requires at least one row");
  const std::size_t p = data.n_features();

  DescriptiveSummary summary;
  std::array<std::vector<double>, kNumModes> sums;
  for (auto& s : sums) s.assign(p, 0.0);
  std::vector<double> total(p, 0.0);

  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    const int m = mode_index(data.labels()[r]);
    ++summary.counts[m];
    for (std::size_t c = 0; c < p; ++c) {
      sums[m][c] += data.at(r, c);
      total[c] += data.at(r, c);
    }
  }
  for (int m = 0; m < kNumModes; ++m) {
    if (summary.counts[m] == 0) continue;
    summary.per_mode_means[m].resize(p);
    for (std::size_t c = 0; c < p; ++c)
      summary.per_mode_means[m][c] = sums[m][c] / static_cast<double>(summary.counts[m]);
  }
  summary.overall_means.resize(p);
  for (std::size_t c = 0; c < p; ++c)
    summary.overall_means[c] = total[c] / static_cast<double>(data.n_rows());
  return summary;
}

CorrelationMatrix correlation_matrix(const Dataset& data, const std::vector<std::string>& columns) {
  if (data.n_rows() < 2) throw ValidationError("correlation requires at least 2 rows");
  const std::size_t n = data.n_rows();
  const std::size_t k = columns.size();

  std::vector<std::size_t> idx;
  idx.reserve(k);
  for (const auto& name : columns) {
    auto i = data.schema().index_of(name);
    if (!i) throw SchemaError("unknown column: " + name);
    idx.push_back(*i);
  }

  std::vector<double> mean(k, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < k; ++j) mean[j] += data.at(r, idx[j]);
  for (auto& m : mean) m /= static_cast<double>(n);

  std::vector<double> centered(n * k);
  std::vector<double> ss(k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      const double d = data.at(r, idx[j]) - mean[j];
      centered[r * k + j] = d;
      ss[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (ss[j] == 0.0) throw ValidationError("zero-variance column: " + columns[j]);
  }

  CorrelationMatrix out;
  out.names = columns;
  out.values.assign(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    out.values[a * k + a] = 1.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      double dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += centered[r * k + a] * centered[r * k + b];
      const double corr = dot / std::sqrt(ss[a] * ss[b]);
      out.values[a * k + b] = corr;
      out.values[b * k + a] = corr;
    }
  }
  return out;
}

DistanceHistogram distance_histogram(const Dataset& data, double max_km, double bin_width_km) {
  if (max_km <= 0.0) throw ConfigError("max_km must be positive");
  if (bin_width_km <= 0.0) throw ConfigError("bin_width_km must be positive");
  const auto dist_col = data.schema().index_of("distance_km");
  if (!dist_col) throw SchemaError("schema has no distance_km column");

  DistanceHistogram hist;
  hist.bin_width_km = bin_width_km;
  hist.max_km = max_km;
  const std::size_t n_bins = static_cast<std::size_t>(std::ceil(max_km / bin_width_km));
  for (auto& c : hist.counts) c.assign(n_bins, 0);

  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    const double d = data.at(r, *dist_col);
    if (d >= max_km) continue;
    std::size_t bin = static_cast<std::size_t>(d / bin_width_km);
    if (bin >= n_bins) bin = n_bins - 1;  // guards d just below max_km rounding up
    ++hist.counts[mode_index(data.labels()[r])][bin];
  }
  return hist;
}

}  // namespace modechoice
