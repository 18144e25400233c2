#include "polycycle/rotation.hpp"

#include <algorithm>
#include <cmath>

#include "polycycle/continued_fraction.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/parallel.hpp"
#include "polycycle/scale.hpp"

namespace polycycle {

Arc Arc::from_endpoints(double a, double b, EndpointKind kind) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("arc: endpoints must be finite");
  const double span = b - a;
  if (span >= 1.0) return Arc{circle_reduce(a, 1.0), 1.0, kind};
  return Arc{circle_reduce(a, 1.0), circle_reduce(span, 1.0), kind};
}

Arc Arc::full_circle() { return Arc{0.0, 1.0, EndpointKind::Closed}; }

double Arc::measure() const noexcept { return std::clamp(length, 0.0, 1.0); }

double Arc::end() const { return circle_reduce(start + length, 1.0); }

bool Arc::contains(double x) const {
  if (length >= 1.0) return true;
  const double d = circle_reduce(x - start, 1.0);
  switch (kind) {
    case EndpointKind::Closed: return d <= length;
    case EndpointKind::Open: return d > 0.0 && d < length;
    case EndpointKind::LeftOpen: return d > 0.0 && d <= length;
    case EndpointKind::RightOpen: return d < length;
  }
  return false;
}

Arc Arc::shrunk(double d) const {
  if (d < 0.0) return enlarged(-d);
  if (length >= 1.0) return *this;
  return Arc{circle_reduce(start + d, 1.0), std::max(0.0, length - 2.0 * d), kind};
}

Arc Arc::enlarged(double d) const {
  if (d < 0.0) return shrunk(-d);
  if (length >= 1.0) return *this;
  return Arc{circle_reduce(start - d, 1.0), std::min(1.0, length + 2.0 * d), kind};
}

double RotationProblem::point(std::int64_t j) const {
  const double drift_j = drift ? drift(j) : 0.0;
  return circle_reduce(c + static_cast<double>(j) * rho + drift_j, 1.0);
}

Arc RotationProblem::arc(std::int64_t j) const { return arc_at ? arc_at(j) : limit; }

std::int64_t FrequencyTrace::count(std::int64_t j) const {
  if (j < 1 || j > n()) throw OutOfRange("trace: index " + std::to_string(j) + " outside [1, n]");
  return hits[static_cast<std::size_t>(j - 1)];
}

double FrequencyTrace::psi(std::int64_t j) const {
  return static_cast<double>(count(j)) / static_cast<double>(j);
}

std::int64_t tail_window(std::int64_t n, std::int64_t min_window) {
  return std::min(n, std::max(n / 10, min_window));
}

FrequencyTrace orbit_frequency(const RotationProblem& problem, std::int64_t n, std::int64_t min_window) {
  if (n < 1) throw DomainError("orbit_frequency: n >= 1 required");
  FrequencyTrace trace;
  trace.hits.resize(static_cast<std::size_t>(n));
  // Membership per j in parallel chunks, then a serial prefix sum.
  constexpr std::size_t kChunk = 1 << 15;
  const auto total = static_cast<std::size_t>(n);
  parallel_for((total + kChunk - 1) / kChunk, [&](std::size_t chunk) {
    const std::size_t end = std::min(total, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const auto j = static_cast<std::int64_t>(i) + 1;
      trace.hits[i] = problem.arc(j).contains(problem.point(j)) ? 1 : 0;
    }
  });
  for (std::size_t i = 1; i < total; ++i) trace.hits[i] += trace.hits[i - 1];

  trace.window = tail_window(n, min_window);
  trace.liminf_est = 1.0;
  trace.limsup_est = 0.0;
  for (std::int64_t j = n - trace.window + 1; j <= n; ++j) {
    const double p = trace.psi(j);
    trace.liminf_est = std::min(trace.liminf_est, p);
    trace.limsup_est = std::max(trace.limsup_est, p);
  }
  return trace;
}

bool Prediction::satisfied_by(double liminf, double limsup, double tol) const {
  if (kind == Kind::Exact) return std::fabs(liminf - length) <= tol && std::fabs(limsup - length) <= tol;
  const double inv_q = 1.0 / static_cast<double>(q);
  return -inv_q + limsup <= length + tol && length <= inv_q + liminf + tol;
}

Prediction predicted_limit(double rho, const Arc& limit, std::int64_t q_max) {
  Prediction out;
  out.length = limit.measure();
  if (auto f = rational_approximation(rho, q_max)) {
    out.kind = Prediction::Kind::Bounds;
    out.p = f->p;
    out.q = f->q;
  }
  return out;
}

RationalCount rational_orbit_count(double c, std::int64_t p, std::int64_t q, const Arc& arc) {
  if (q < 1) throw DomainError("rational_orbit_count: q >= 1 required");
  if (gcd(p, q) != 1) {
    throw DomainError("rational_orbit_count: p/q = " + std::to_string(p) + "/" + std::to_string(q) +
                      " is not in lowest terms");
  }
  RationalCount out;
  const std::int64_t step = ((p % q) + q) % q;
  for (std::int64_t j = 1; j <= q; ++j) {
    const auto residue = static_cast<double>((j * step) % q);
    if (arc.contains(circle_reduce(c + residue / static_cast<double>(q), 1.0))) ++out.count;
  }
  const double ql = static_cast<double>(q) * arc.measure();
  out.lower = static_cast<std::int64_t>(std::ceil(ql)) - 1;
  out.upper = static_cast<std::int64_t>(std::floor(ql)) + 1;
  out.within_bounds = out.lower <= out.count && out.count <= out.upper;
  return out;
}

}  // namespace polycycle
