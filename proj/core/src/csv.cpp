#include "unigen/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "unigen/error.hpp"

namespace unigen::csv {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value,
                                    std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

Metadata& Metadata::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
  return *this;
}

Metadata& Metadata::add(std::string key, double value) {
  return add(std::move(key), format_double(value));
}

void Metadata::write(std::ostream& out) const {
  for (const auto& [key, value] : entries_) out << "# " << key << ": " << value << '\n';
}

std::optional<std::size_t> Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::vector<Table> read_tables(std::istream& in) {
  std::vector<Table> tables;
  Table current;
  bool open = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    if (line.empty()) {
      if (open) tables.push_back(std::move(current));
      current = Table{};
      open = false;
      continue;
    }
    if (!open) {
      current.header = split_fields(line);
      open = true;
    } else {
      auto fields = split_fields(line);
      if (fields.size() != current.header.size()) {
        throw FormatError("csv row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(current.header.size()));
      }
      current.rows.push_back(std::move(fields));
    }
  }
  if (open) tables.push_back(std::move(current));
  return tables;
}

std::vector<Table> read_tables_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_tables(in);
}

double parse_double(const std::string& field) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto result = std::from_chars(field.data(), end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw FormatError("not a number: '" + field + "'");
  }
  return value;
}

}  // namespace unigen::csv
