#include "modechoice/schema.hpp"

#include <unordered_set>

#include "modechoice/errors.hpp"
#include "modechoice/hash.hpp"

namespace modechoice {

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::Continuous: return "continuous";
    case ColumnKind::Count: return "count";
    case ColumnKind::Binary: return "binary";
  }
  return "unknown";
}

FeatureSchema::FeatureSchema(std::vector<Column> columns, std::vector<IndicatorGroup> groups)
    : columns_(std::move(columns)), groups_(std::move(groups)) {
  std::unordered_set<std::string> seen;
  for (const auto& col : columns_) {
    if (col.name.empty()) throw SchemaError("column with empty name");
    if (!seen.insert(col.name).second) throw SchemaError("duplicate column name: " + col.name);
  }
  for (const auto& group : groups_) {
    for (std::size_t idx : group.columns) {
      if (idx >= columns_.size())
        throw SchemaError("indicator group '" + group.name + "' references a missing column");
      if (columns_[idx].kind != ColumnKind::Binary)
        throw SchemaError("indicator group '" + group.name + "' contains non-binary column " +
                          columns_[idx].name);
    }
  }
  std::string key;
  for (const auto& col : columns_) {
    key += col.name;
    key += ':';
    key += to_string(col.kind);
    key += ';';
  }
  fingerprint_ = fnv1a64(key);
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
  return fingerprint_ == other.fingerprint_;
}

const FeatureSchema& FeatureSchema::canonical() {
  static const FeatureSchema schema = [] {
    std::vector<Column> cols = {
        {"distance_km", ColumnKind::Continuous, "km"},
        {"same_municipality", ColumnKind::Binary, ""},
        {"urban", ColumnKind::Binary, ""},
        {"suburban", ColumnKind::Binary, ""},
        {"rural", ColumnKind::Binary, ""},
        {"pt_very_good", ColumnKind::Binary, ""},
        {"pt_good", ColumnKind::Binary, ""},
        {"pt_moderate", ColumnKind::Binary, ""},
        {"pt_poor", ColumnKind::Binary, ""},
        {"pt_none", ColumnKind::Binary, ""},
        {"age_years", ColumnKind::Count, "years"},
        {"female", ColumnKind::Binary, ""},
        {"swiss", ColumnKind::Binary, ""},
        {"french", ColumnKind::Binary, ""},
        {"italian", ColumnKind::Binary, ""},
        {"household_size", ColumnKind::Count, ""},
        {"n_cars", ColumnKind::Count, ""},
        {"n_bikes", ColumnKind::Count, ""},
        {"home_owner", ColumnKind::Binary, ""},
        {"rain", ColumnKind::Binary, ""},
    };
    std::vector<IndicatorGroup> groups = {
        {"urbanization", {2, 3, 4}, false},
        {"pt_service", {5, 6, 7, 8, 9}, false},
        // german is the absorbed reference level: both indicators may be 0.
        {"language", {13, 14}, true},
    };
    return FeatureSchema(std::move(cols), std::move(groups));
  }();
  return schema;
}

}  // namespace modechoice
