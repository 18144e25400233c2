#include "polycycle/scale.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "polycycle/errors.hpp"

namespace polycycle {

double max_representable_neglog() noexcept {
  static const double kMax = -std::log(DBL_MIN);
  return kMax;
}

LogLogCoord xi_from_x(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("xi_from_x: x must lie in (0, 1), got " + std::to_string(x));
  }
  return LogLogCoord{std::log(-std::log(x))};
}

std::optional<double> x_from_xi(LogLogCoord c) noexcept {
  const double u = std::exp(c.xi);
  if (!(u <= max_representable_neglog())) return std::nullopt;
  return std::exp(-u);
}

NegLog neglog_from_x(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("neglog_from_x: x must lie in (0, 1), got " + std::to_string(x));
  }
  return NegLog{-std::log(x)};
}

NegLog neglog_from_xi(LogLogCoord c) noexcept { return NegLog{std::exp(c.xi)}; }

LogLogCoord xi_from_neglog(NegLog u) {
  if (!(u.u > 0.0)) {
    throw DomainError("xi_from_neglog: u must be positive, got " + std::to_string(u.u));
  }
  return LogLogCoord{std::log(u.u)};
}

NegLog power_law_step_u(NegLog u, double lambda, double c) {
  if (!(lambda > 0.0)) throw DomainError("power_law_step_u: exponent must be positive");
  const double next = lambda * u.u - c;
  if (!(next > 0.0)) {
    throw DomainError("power_law_step_u: image left (0, 1): lambda*u - c = " +
                      std::to_string(next));
  }
  return NegLog{next};
}

double circle_reduce(double t, double circumference) {
  if (!(circumference > 0.0) || !std::isfinite(circumference)) {
    throw DomainError("circle_reduce: circumference must be positive and finite");
  }
  double r = std::fmod(t, circumference);
  if (r < 0.0) r += circumference;
  // A tiny negative remainder can round up to the circumference itself.
  if (r >= circumference) r = 0.0;
  return r;
}

double neglog_sum(double a, double b) noexcept {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (std::isinf(hi)) return lo;
  return lo - std::log1p(std::exp(lo - hi));
}

}  // namespace polycycle
