#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fraudcc {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line the record starts on
  std::string error;     // non-empty when the record is malformed
};

/// RFC-4180 reader: quoted fields, doubled quotes, embedded separators and
/// line breaks, CRLF or LF endings. Blank lines are skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in, char separator = ',') : in_(in), sep_(separator) {}

  /// Returns false at end of input.
  bool next(CsvRecord& record);

 private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 0;
};

std::string csv_escape(std::string_view field, char separator = ',');

}  // namespace fraudcc
