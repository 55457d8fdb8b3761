#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace windsweep::csv {

/// Splits one CSV record on commas. Double-quoted fields may contain commas
/// and escaped quotes (""); embedded newlines are not supported.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape_field(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-field parse; surrounding blanks are ignored.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace windsweep::csv
