#pragma once

// Visit frequencies of sequences x_n = c + nρ + o(1) on the circle R/Z
// against arcs J_n converging to a limit arc J.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace polycycle {

enum class EndpointKind { Closed, Open, LeftOpen, RightOpen };

// The arc from `start` counter-clockwise over `length`; length >= 1 is the
// whole circle. LeftOpen is (a, b], RightOpen is [a, b).
struct Arc {
  double start = 0.0;
  double length = 0.0;
  EndpointKind kind = EndpointKind::Closed;

  static Arc from_endpoints(double a, double b, EndpointKind kind = EndpointKind::Closed);
  static Arc full_circle();

  bool contains(double x) const;
  double measure() const noexcept;
  double end() const;
  // [a + d, b - d] and [a - d, b + d] with the same endpoint kind.
  Arc shrunk(double d) const;
  Arc enlarged(double d) const;
};

struct RotationProblem {
  double c = 0.0;
  double rho = 0.0;
  std::function<double(std::int64_t)> drift;  // empty = 0
  std::function<Arc(std::int64_t)> arc_at;    // empty = the limit arc
  Arc limit;

  double point(std::int64_t j) const;
  Arc arc(std::int64_t j) const;
};

struct FrequencyTrace {
  // hits[j - 1] = #{i <= j : x_i in J_i}
  std::vector<std::int64_t> hits;
  double liminf_est = 0.0;
  double limsup_est = 0.0;
  std::int64_t window = 0;

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(hits.size()); }
  std::int64_t count(std::int64_t j) const;
  double psi(std::int64_t j) const;
};

// Tail window used for the lim inf / lim sup estimates: max(n/10, min_window),
// capped at n.
std::int64_t tail_window(std::int64_t n, std::int64_t min_window = 1000);

FrequencyTrace orbit_frequency(const RotationProblem& problem, std::int64_t n, std::int64_t min_window = 1000);

struct Prediction {
  enum class Kind { Exact, Bounds };
  Kind kind = Kind::Exact;
  double length = 0.0;  // |J|
  std::int64_t p = 0;
  std::int64_t q = 0;

  // Exact: |psi - |J|| <= tol for both estimates. Bounds:
  // -1/q + limsup <= |J| <= 1/q + liminf.
  bool satisfied_by(double liminf, double limsup, double tol = 0.0) const;
};

Prediction predicted_limit(double rho, const Arc& limit, std::int64_t q_max = 10'000);

struct RationalCount {
  std::int64_t count = 0;
  std::int64_t lower = 0;  // ceil(q|J|) - 1
  std::int64_t upper = 0;  // floor(q|J|) + 1
  bool within_bounds = false;
};

// Points c + j p/q, j = 1..q, inside J. Throws DomainError unless q >= 1 and
// gcd(p, q) = 1.
RationalCount rational_orbit_count(double c, std::int64_t p, std::int64_t q, const Arc& arc);

}  // namespace polycycle
