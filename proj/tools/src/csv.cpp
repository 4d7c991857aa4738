#include "kerrtrack/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kerrtrack::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : file_(path, std::ios::binary | std::ios::trunc), out_(&file_), path_(path),
      columns_(header.size()) {
  if (!file_) throw std::runtime_error("cannot write " + path);
  write_header(header);
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header)
    : out_(&os), path_("<stream>"), columns_(header.size()) {
  write_header(header);
}

void CsvWriter::write_header(const std::vector<std::string>& header) {
  for (const auto& h : header) put(h);
  end_row();
  rows_ = 0;
}

void CsvWriter::put(std::string_view raw) {
  if (in_row_ > 0) *out_ << ',';
  *out_ << raw;
  ++in_row_;
}

CsvWriter& CsvWriter::cell(double value) {
  put(format_double(value));
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    put(text);
    return *this;
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c == '\n' ? ' ' : c;
  }
  quoted += '"';
  put(quoted);
  return *this;
}

CsvWriter& CsvWriter::cell(std::size_t value) {
  put(std::to_string(value));
  return *this;
}

CsvWriter& CsvWriter::cell(bool value) {
  put(value ? "true" : "false");
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) {
    throw std::logic_error(path_ + ": row has " + std::to_string(in_row_) + " cells, expected " +
                           std::to_string(columns_));
  }
  *out_ << '\n';
  if (!*out_) throw std::runtime_error("write failed: " + path_);
  in_row_ = 0;
  ++rows_;
}

}  // namespace kerrtrack::cli
