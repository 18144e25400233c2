#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace polycycle::lab {

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string input;   // empty: command default (certify uses the shipped models)
  std::string output;  // empty: stdout
  Format format = Format::Csv;
  double tol = 1e-12;
  std::optional<std::int64_t> depth;
  std::uint64_t seed = 0;
  bool check = false;
  std::string table;   // th-run: optional spark table CSV
};

// Exit status: 0 success, 2 validation failure, 1 I/O or domain error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitValidation = 2;

int run(const RunConfig& config, std::ostream& err);

}  // namespace polycycle::lab
