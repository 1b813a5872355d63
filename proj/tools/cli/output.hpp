#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace csrbf::cli {

enum class OutputFormat { csv, json };

using SummaryValue = std::variant<std::monostate, bool, long long, double, std::string>;

/// A summary record plus one numeric table. CSV renders the summary as leading
/// "# key=value" lines followed by the header row; JSON renders
/// {"summary": {...}, "rows": [{column: value}, ...]}.
struct Report {
  std::vector<std::pair<std::string, SummaryValue>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void set(std::string key, SummaryValue value) {
    summary.emplace_back(std::move(key), std::move(value));
  }
};

/// Locale-independent, round-trip exact: 17 significant digits.
std::string format_number(double value);

void write_csv(std::ostream& os, const Report& report);
void write_json(std::ostream& os, const Report& report);
void write_report(std::ostream& os, const Report& report, OutputFormat format);

}  // namespace csrbf::cli
