#include "fraudcc/csv.hpp"

#include <istream>

namespace fraudcc {

bool CsvReader::next(CsvRecord& record) {
  record.fields.clear();
  record.error.clear();

  std::string line;
  while (true) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }
  record.line = line_;

  std::string field;
  bool in_quotes = false;
  bool after_quote = false;  // closing quote seen; only a separator may follow
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (in_quotes) {
        // Quoted field spans a line break.
        std::string more;
        if (!std::getline(in_, more)) {
          record.error = "unterminated quoted field";
          record.fields.push_back(std::move(field));
          return true;
        }
        ++line_;
        if (!more.empty() && more.back() == '\r') more.pop_back();
        field.push_back('\n');
        line = std::move(more);
        i = 0;
        continue;
      }
      record.fields.push_back(std::move(field));
      return true;
    }
    const char c = line[i++];
    if (in_quotes) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == sep_) {
      record.fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (after_quote) {
      record.error = "unexpected character after closing quote";
      // Consume the rest of the logical record so the next call resyncs.
      record.fields.push_back(std::move(field));
      return true;
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else {
      field.push_back(c);
    }
  }
}

std::string csv_escape(std::string_view field, char separator) {
  bool needs_quotes = false;
  for (char c : field) {
    if (c == separator || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace fraudcc
