#pragma once

#include <string>

#include "modechoice/dataset.hpp"

namespace modechoice {

// Reads a comma-separated file whose header must equal the schema's column
// names in order followed by a trailing `mode` column. Mode values are the
// lowercase wire names. Throws SchemaError for header problems and
// ValidationError (with the 0-based data row) for cell problems.
Dataset load_csv(const std::string& path, const FeatureSchema& schema);

// Writes the canonical CSV: UTF-8, LF line endings, comma-separated, `.`
// decimal, shortest round-trip numeric formatting.
void write_csv(const Dataset& data, const std::string& path);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace modechoice
