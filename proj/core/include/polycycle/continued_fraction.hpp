#pragma once

#include <cstdint>
#include <optional>

namespace polycycle {

struct Fraction {
  std::int64_t p = 0;
  std::int64_t q = 1;

  double value() const noexcept { return static_cast<double>(p) / static_cast<double>(q); }
  friend constexpr bool operator==(Fraction, Fraction) = default;
};

inline constexpr std::int64_t kDefaultMaxDenominator = 10'000;
inline constexpr double kDefaultRationalTolerance = 1e-12;

// Returns the first continued-fraction convergent p/q of v with q <= q_max and
// |v - p/q| <= tol * max(1, |v|), or nullopt if none exists. A float cannot be
// certified irrational; nullopt only means "no small-denominator fraction
// explains v".
std::optional<Fraction> rational_approximation(double v,
                                               std::int64_t q_max = kDefaultMaxDenominator,
                                               double tol = kDefaultRationalTolerance);

std::int64_t gcd(std::int64_t a, std::int64_t b) noexcept;

}  // namespace polycycle
