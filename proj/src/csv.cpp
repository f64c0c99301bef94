#include "rulemine/csv.hpp"

#include <istream>
#include <ostream>

#include "rulemine/errors.hpp"

namespace rulemine::csv {
namespace {

// Reads one record, which may span physical lines inside quotes.
bool read_record(std::istream& in, Fields& out) {
  out.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch = 0;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (!any) return false;
  if (in_quotes) throw SchemaError("unterminated quoted field");
  out.push_back(std::move(field));
  return true;
}

bool blank(const Fields& f) { return f.size() == 1 && f.front().empty(); }

}  // namespace

Table read(std::istream& in) {
  Table table;
  Fields record;
  bool have_header = false;
  while (read_record(in, record)) {
    if (blank(record)) continue;
    if (!have_header) {
      // Strip a UTF-8 byte-order mark from the first header cell.
      if (record.front().starts_with("\xEF\xBB\xBF")) record.front().erase(0, 3);
      table.header = record;
      have_header = true;
    } else {
      table.rows.push_back(record);
    }
  }
  if (!have_header) throw SchemaError("CSV input has no header row");
  return table;
}

Fields split_line(std::string_view line) {
  Fields fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r' && ch != '\n') {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Fields& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

}  // namespace rulemine::csv
