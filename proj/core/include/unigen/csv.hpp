#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace unigen::csv {

/// 17 significant digits, '.' decimal point, independent of the global locale.
std::string format_double(double value);

/// Ordered key/value block written as "# key: value" lines at the top of
/// every output file.
class Metadata {
 public:
  Metadata& add(std::string key, std::string value);
  Metadata& add(std::string key, double value);
  void write(std::ostream& out) const;
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index of `name`, if present.
  [[nodiscard]] std::optional<std::size_t> column(const std::string& name) const;
};

/// Parses comma-separated tables. '#' lines are metadata and are skipped;
/// a blank line ends a table; the first line of each table is its header.
std::vector<Table> read_tables(std::istream& in);
std::vector<Table> read_tables_file(const std::string& path);

double parse_double(const std::string& field);

}  // namespace unigen::csv
