#include "polycycle/continued_fraction.hpp"

#include <cmath>
#include <cstdlib>

namespace polycycle {

std::int64_t gcd(std::int64_t a, std::int64_t b) noexcept {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<Fraction> rational_approximation(double v, std::int64_t q_max, double tol) {
  if (!std::isfinite(v) || q_max < 1 || std::fabs(v) > 1e15) return std::nullopt;
  const double scale = std::max(1.0, std::fabs(v));

  // Convergent recurrences h_k = a_k h_{k-1} + h_{k-2}, likewise for k.
  std::int64_t h_prev = 1, h_prev2 = 0;
  std::int64_t k_prev = 0, k_prev2 = 1;
  double rest = v;
  for (int step = 0; step < 64; ++step) {
    const double a_real = std::floor(rest);
    if (std::fabs(a_real) > 9e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t h = a * h_prev + h_prev2;
    const std::int64_t k = a * k_prev + k_prev2;
    if (k > q_max || k <= 0) break;
    const double approx = static_cast<double>(h) / static_cast<double>(k);
    if (std::fabs(v - approx) <= tol * scale) return Fraction{h, k};
    const double frac = rest - a_real;
    if (frac <= 0.0) break;
    rest = 1.0 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

}  // namespace polycycle
