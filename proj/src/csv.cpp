#include "wikivote/csv.hpp"

#include <charconv>
#include <cmath>

#include "wikivote/error.hpp"

namespace wikivote::csv {

namespace {

void strip_line_end(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace

std::optional<std::vector<std::string>> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(current));
  return fields;
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape_field(fields[i]);
  }
  out << '\n';
}

Reader::Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    strip_line_end(line);
    if (line_ == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!is_blank(line)) break;
  }
  if (is_blank(line)) throw ParseError(source_, line_, "missing header row");
  auto header = split_record(line);
  if (!header) throw ParseError(source_, line_, "unterminated quote in header");
  header_ = std::move(*header);
  for (std::size_t i = 0; i < header_.size(); ++i) {
    auto& name = header_[i];
    const auto b = name.find_first_not_of(" \t");
    const auto e = name.find_last_not_of(" \t");
    name = b == std::string::npos ? std::string{} : name.substr(b, e - b + 1);
    if (!index_.emplace(name, i).second) {
      throw ParseError(source_, line_, "duplicate column '" + name + "'");
    }
  }
}

bool Reader::has_column(std::string_view name) const { return index_.find(name) != index_.end(); }

std::vector<std::string> Reader::missing_columns(const std::vector<std::string>& required) const {
  std::vector<std::string> missing;
  for (const auto& name : required) {
    if (!has_column(name)) missing.push_back(name);
  }
  return missing;
}

bool Reader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    strip_line_end(line);
    if (is_blank(line)) continue;
    auto fields = split_record(line);
    if (!fields) fail("unterminated quote");
    if (fields->size() != header_.size()) {
      fail("expected " + std::to_string(header_.size()) + " fields, found " +
           std::to_string(fields->size()));
    }
    fields_ = std::move(*fields);
    return true;
  }
  return false;
}

const std::string& Reader::field(std::string_view column) const {
  auto it = index_.find(column);
  if (it == index_.end()) fail("no column '" + std::string(column) + "'");
  return fields_[it->second];
}

double Reader::number(std::string_view column) const {
  const auto& text = field(column);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    fail("column '" + std::string(column) + "': not a number: '" + text + "'");
  }
  return value;
}

std::optional<double> Reader::optional_number(std::string_view column) const {
  if (field(column).empty()) return std::nullopt;
  return number(column);
}

std::int64_t Reader::integer(std::string_view column) const {
  const auto& text = field(column);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail("column '" + std::string(column) + "': not an integer: '" + text + "'");
  }
  return value;
}

bool Reader::flag(std::string_view column) const {
  const auto& text = field(column);
  if (text == "0") return false;
  if (text == "1") return true;
  fail("column '" + std::string(column) + "': expected 0 or 1, found '" + text + "'");
}

void Reader::fail(const std::string& what) const { throw ParseError(source_, line_, what); }

}  // namespace wikivote::csv
