#pragma once

// Arithmetic on the neg-log scale u = -ln x and the log-log scale
// xi = ln(-ln x). Points like exp(-exp(40)) are far below the smallest double
// but are perfectly ordinary on either scale.

#include <optional>

namespace polycycle {

// A point x in (0, 1) stored as xi = ln(-ln x). The map x -> xi is
// decreasing: larger xi means a point closer to zero.
struct LogLogCoord {
  double xi = 0.0;

  friend constexpr bool operator==(LogLogCoord, LogLogCoord) = default;
};

// A point x in (0, 1) stored as u = -ln x > 0.
struct NegLog {
  double u = 1.0;

  friend constexpr bool operator==(NegLog, NegLog) = default;
};

// Smallest u for which exp(-u) is still a normal double.
double max_representable_neglog() noexcept;

LogLogCoord xi_from_x(double x);

// exp(-exp(xi)), or std::nullopt when the result is below the normal double
// range. Underflow is an expected outcome: callers stay on the xi-scale.
std::optional<double> x_from_xi(LogLogCoord c) noexcept;

NegLog neglog_from_x(double x);
NegLog neglog_from_xi(LogLogCoord c) noexcept;
LogLogCoord xi_from_neglog(NegLog u);

// u -> lambda*u - c, i.e. x -> C*x^lambda with c = ln C. Throws DomainError
// if the image leaves (0, 1).
NegLog power_law_step_u(NegLog u, double lambda, double c);

// t mod circumference, in [0, circumference).
double circle_reduce(double t, double circumference);

// -ln(exp(-a) + exp(-b)) without leaving the u-scale. Either argument may be
// +infinity (a zero summand).
double neglog_sum(double a, double b) noexcept;

}  // namespace polycycle
