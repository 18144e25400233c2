#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace polycycle {

// 17 significant digits, '.' decimal separator, independent of the locale.
std::string format_double(double v);

// RFC-4180 quoting: a field holding any of `,"\r\n` is quoted, inner quotes
// doubled. Records end with '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(std::initializer_list<std::string_view> fields);
  void row(const std::vector<std::string>& fields);

  static std::string quote(std::string_view field);

 private:
  std::ostream& out_;
};

}  // namespace polycycle
