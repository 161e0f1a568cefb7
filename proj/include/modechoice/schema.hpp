#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modechoice {

enum class ColumnKind { Continuous, Count, Binary };

std::string_view to_string(ColumnKind kind);

struct Column {
  std::string name;
  ColumnKind kind;
  std::string unit;  // empty when dimensionless
};

// A group of binary indicator columns that are mutually exclusive per row.
// When reference_absorbed is true the group may also sum to 0 (the reference
// level has no column of its own); otherwise it must sum to exactly 1.
struct IndicatorGroup {
  std::string name;
  std::vector<std::size_t> columns;
  bool reference_absorbed = false;
};

// Ordered, typed column metadata. Column order is fixed and defines the CSV
// layout and the feature indices used by trees and importance vectors.
class FeatureSchema {
 public:
  explicit FeatureSchema(std::vector<Column> columns, std::vector<IndicatorGroup> groups = {});

  // The built-in school-journey schema: 20 predictor columns. Travel time is
  // deliberately not a predictor; the german language region is the absorbed
  // reference level of the language group.
  static const FeatureSchema& canonical();

  std::size_t size() const { return columns_.size(); }
  const Column& column(std::size_t i) const { return columns_[i]; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<IndicatorGroup>& indicator_groups() const { return groups_; }

  std::optional<std::size_t> index_of(std::string_view name) const;

  // Stable hash of (name, kind) pairs in order; models and datasets carry it
  // so mismatched schemas are rejected instead of silently misread.
  std::uint64_t fingerprint() const { return fingerprint_; }

  bool operator==(const FeatureSchema& other) const;

 private:
  std::vector<Column> columns_;
  std::vector<IndicatorGroup> groups_;
  std::uint64_t fingerprint_ = 0;
};

}  // namespace modechoice
