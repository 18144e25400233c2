#include "polycycle/csv.hpp"

#include <cmath>
#include <cstdio>

namespace polycycle {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // snprintf honours LC_NUMERIC; the output format must not.
  for (char& ch : buf) {
    if (ch == ',') ch = '.';
  }
  return buf;
}

std::string CsvWriter::quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void CsvWriter::row(std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out_ << ',';
    out_ << quote(f);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out_ << ',';
    out_ << quote(f);
    first = false;
  }
  out_ << '\n';
}

}  // namespace polycycle
