#include "modechoice/dataset.hpp"

#include <cmath>

#include "modechoice/errors.hpp"

namespace modechoice {

Dataset::Dataset(FeatureSchema schema, std::vector<double> values, std::vector<TravelMode> labels)
    : schema_(std::move(schema)), values_(std::move(values)), labels_(std::move(labels)) {
  if (values_.size() != labels_.size() * schema_.size())
    throw ValidationError("value buffer size does not match rows x columns");
  validate();
}

void Dataset::validate() const {
  const std::size_t p = schema_.size();
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    const double* row = values_.data() + r * p;
    for (std::size_t c = 0; c < p; ++c) {
      const Column& col = schema_.column(c);
      const double v = row[c];
      if (!std::isfinite(v))
        throw ValidationError(r, "non-finite value in column " + col.name);
      switch (col.kind) {
        case ColumnKind::Binary:
          if (v != 0.0 && v != 1.0)
            throw ValidationError(r, "binary column " + col.name + " outside {0,1}");
          break;
        case ColumnKind::Count:
          if (v < 0.0 || v != std::floor(v))
            throw ValidationError(r, "count column " + col.name + " must be a non-negative integer");
          break;
        case ColumnKind::Continuous:
          if (v < 0.0) throw ValidationError(r, "column " + col.name + " must be non-negative");
          break;
      }
    }
    for (const auto& group : schema_.indicator_groups()) {
      double sum = 0.0;
      for (std::size_t c : group.columns) sum += row[c];
      const bool ok = group.reference_absorbed ? (sum == 0.0 || sum == 1.0) : (sum == 1.0);
      if (!ok)
        throw ValidationError(r, "indicator group '" + group.name + "' sums to " +
                                     std::to_string(static_cast<long long>(sum)) +
                                     (group.reference_absorbed ? ", expected 0 or 1" : ", expected 1"));
    }
  }
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  const std::size_t p = schema_.size();
  std::vector<double> values;
  values.reserve(rows.size() * p);
  std::vector<TravelMode> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    const double* src = values_.data() + r * p;
    values.insert(values.end(), src, src + p);
    labels.push_back(labels_[r]);
  }
  return Dataset(schema_, std::move(values), std::move(labels));
}

std::array<std::size_t, kNumModes> Dataset::mode_counts() const {
  std::array<std::size_t, kNumModes> counts{};
  for (TravelMode m : labels_) ++counts[mode_index(m)];
  return counts;
}

bool Dataset::operator==(const Dataset& other) const {
  return schema_ == other.schema_ && values_ == other.values_ && labels_ == other.labels_;
}

}  // namespace modechoice
