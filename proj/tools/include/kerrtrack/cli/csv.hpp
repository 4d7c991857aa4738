#pragma once

// Minimal CSV writer: comma separated, '.' decimal, LF endings, doubles at
// round-trip precision so identical runs give identical bytes.

#include <cstddef>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kerrtrack::cli {

std::string format_double(double value);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header);
  CsvWriter(std::ostream& os, std::vector<std::string> header);

  CsvWriter& cell(double value);
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(std::size_t value);
  CsvWriter& cell(bool value);
  /// Terminates the row; throws if the cell count does not match the header.
  void end_row();

  std::size_t rows() const { return rows_; }

 private:
  void put(std::string_view raw);
  void write_header(const std::vector<std::string>& header);

  std::ofstream file_;
  std::ostream* out_ = nullptr;
  std::string path_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
};

}  // namespace kerrtrack::cli
