#ifndef RULEMINE_CSV_HPP
#define RULEMINE_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rulemine::csv {

using Fields = std::vector<std::string>;

struct Table {
  Fields header;
  std::vector<Fields> rows;
};

/// Comma-separated, double-quote quoting (RFC 4180). Blank lines are skipped.
/// A missing header throws SchemaError.
Table read(std::istream& in);

/// Splits a single logical line; quoted fields may not span lines here.
Fields split_line(std::string_view line);

std::string quote(std::string_view field);
void write_row(std::ostream& out, const Fields& fields);

}  // namespace rulemine::csv

#endif
