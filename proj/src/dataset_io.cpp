#include "modechoice/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "modechoice/errors.hpp"

namespace modechoice {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_cell(std::string_view field, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ValidationError(row, "non-numeric cell in column " + column + ": '" +
                                   std::string(field) + "'");
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const FeatureSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_fields(line);
  const std::size_t p = schema.size();
  // Exact header match, in order; name the first offending column.
  for (std::size_t i = 0; i < header.size() && i < p; ++i) {
    if (header[i] != schema.column(i).name)
      throw SchemaError("unexpected column '" + std::string(header[i]) + "', expected '" +
                        schema.column(i).name + "' at position " + std::to_string(i));
  }
  if (header.size() < p + 1) {
    const std::string missing =
        header.size() < p ? schema.column(header.size()).name : std::string("mode");
    throw SchemaError("missing column: " + missing);
  }
  if (header[p] != "mode") throw SchemaError("unexpected column '" + std::string(header[p]) +
                                             "', expected 'mode' at position " + std::to_string(p));
  if (header.size() > p + 1)
    throw SchemaError("extra column: " + std::string(header[p + 1]));

  std::vector<double> values;
  std::vector<TravelMode> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != p + 1)
      throw ValidationError(row, "expected " + std::to_string(p + 1) + " fields, found " +
                                     std::to_string(fields.size()));
    for (std::size_t c = 0; c < p; ++c)
      values.push_back(parse_cell(fields[c], row, schema.column(c).name));
    const auto mode = parse_mode(fields[p]);
    if (!mode)
      throw ValidationError(row, "unknown mode string: '" + std::string(fields[p]) + "'");
    labels.push_back(*mode);
    ++row;
  }
  return Dataset(schema, std::move(values), std::move(labels));
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ostringstream out;
  const FeatureSchema& schema = data.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) out << schema.column(c).name << ',';
  out << "mode\n";
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) out << format_double(data.at(r, c)) << ',';
    out << to_string(data.labels()[r]) << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write file: " + path);
  file << out.str();
}

}  // namespace modechoice
