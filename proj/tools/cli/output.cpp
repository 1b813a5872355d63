#include "cli/output.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "json.hpp"

namespace csrbf::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string render(const SummaryValue& value) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, value);
}

Json to_json(double d) {
  if (!std::isfinite(d)) return nullptr;
  return d;
}

Json to_json(const SummaryValue& value) {
  struct Visitor {
    Json operator()(std::monostate) const { return nullptr; }
    Json operator()(bool b) const { return b; }
    Json operator()(long long i) const { return i; }
    Json operator()(double d) const { return to_json(d); }
    Json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Report& report) {
  for (const auto& [key, value] : report.summary) os << "# " << key << '=' << render(value) << '\n';
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    os << (c ? "," : "") << report.columns[c];
  }
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Report& report) {
  Json doc;
  doc["summary"] = Json::object();
  for (const auto& [key, value] : report.summary) doc["summary"][key] = to_json(value);
  doc["rows"] = Json::array();
  for (const auto& row : report.rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < row.size() && c < report.columns.size(); ++c) {
      obj[report.columns[c]] = to_json(row[c]);
    }
    doc["rows"].push_back(std::move(obj));
  }
  os << doc.dump(2) << '\n';
}

void write_report(std::ostream& os, const Report& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    write_json(os, report);
  } else {
    write_csv(os, report);
  }
}

}  // namespace csrbf::cli
