#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wikivote::csv {

// Splits one RFC 4180 record ("" inside quotes is a literal quote).
// Embedded newlines are not supported; an unterminated quote returns nullopt.
std::optional<std::vector<std::string>> split_record(std::string_view line);

// Quotes a field only when it contains a separator, quote or newline.
std::string escape_field(std::string_view field);
void write_record(std::ostream& out, const std::vector<std::string>& fields);

// Header-addressed reader. Blank lines are skipped, a UTF-8 BOM and CR
// line endings are tolerated.
class Reader {
 public:
  // Throws ParseError if the header row is missing or malformed.
  Reader(std::istream& in, std::string source);

  const std::vector<std::string>& header() const { return header_; }
  const std::string& source() const { return source_; }
  bool has_column(std::string_view name) const;
  // Names from `required` absent from the header, in the given order.
  std::vector<std::string> missing_columns(const std::vector<std::string>& required) const;

  // Advances to the next record; false at end of input.
  bool next();
  std::size_t line() const { return line_; }
  const std::string& field(std::string_view column) const;

  // Typed accessors; each throws ParseError naming the line and column.
  double number(std::string_view column) const;
  std::optional<double> optional_number(std::string_view column) const;
  std::int64_t integer(std::string_view column) const;
  bool flag(std::string_view column) const;

  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::string> fields_;
  std::size_t line_ = 0;
};

}  // namespace wikivote::csv
