#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace qhypo {

// Comma-separated table with a header row. Values are written with 17
// significant digits so they parse back to the same double.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  // Throws ValidationError if the row width differs from the header.
  void add_row(std::vector<double> row);
  void add_row(std::initializer_list<double> row) { add_row(std::vector<double>(row)); }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  std::string to_string() const;
  // Throws IoError when the file cannot be written.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string format_number(double v);

// Inverse of CsvTable::to_string. Throws ValidationError on ragged or
// non-numeric input.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace qhypo
