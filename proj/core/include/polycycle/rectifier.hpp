#pragma once

// Rectifying charts: the continuous ξ with ξ(Δ(x)) = ξ(x) + ln Λ and
// ξ(x) = ln(-ln x) + O(1/(-ln x)), computed as the limit of
//
//   ξ_n(x) = ln(-ln Δ^n(x)) - n ln Λ.
//
// For Λ > 1 the limit is taken along forward iterates. For Λ < 1 the same
// construction runs on Δ^{-1} (exponent 1/Λ), which yields the chart of Δ
// itself with shift ln Λ < 0.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "polycycle/map_family.hpp"
#include "polycycle/scale.hpp"

namespace polycycle {

struct RectifyOptions {
  std::int64_t step_budget = 10'000;
  // Multiplier on the measured tail constant in the stopping rule.
  double safety = 2.0;
  std::int64_t min_steps = 2;
};

struct ChartPoint {
  double xi = 0.0;
  // Running max of |ξ_{n+1} - ξ_n| * (-ln Δ^n(x)).
  double tail_constant = 0.0;
  // Certified bound on |ξ - ξ_n| at the stopping index.
  double tail_bound = 0.0;
  std::int64_t steps = 0;
};

// Chart of an expanding-in-u map (Λ > 1) at u = -ln x, with |error| < tol.
ChartPoint rectify_u(const MapFamily& map, NegLog u, double tol, const RectifyOptions& options = {});

double rectify(const MapFamily& map, double x, double tol, const RectifyOptions& options = {});

// Chart of a Λ < 1 map at fixed ε, via the inverse map.
double rectify_contracting_inverse(const MapFamilyPtr& map, double x, double tol,
                                   double eps_u = kZeroEpsU, const RectifyOptions& options = {});

class RectifyingChart {
 public:
  // Chart of `map` at ε = 0 (or at eps_u when given).
  RectifyingChart(MapFamilyPtr map, double tol, RectifyOptions options = {}, double eps_u = kZeroEpsU);

  double operator()(double x) const;
  ChartPoint at_u(NegLog u) const;

  const MapFamily& source() const noexcept { return *source_; }
  // ln Λ of the source map; negative for contracting charts.
  double ln_lambda() const noexcept { return ln_lambda_; }
  double tolerance() const noexcept { return tol_; }
  // The chart is evaluated on (0, domain_radius()).
  double domain_radius() const noexcept { return rectified_->domain_radius(); }
  // Tail constant measured on reference points at construction.
  double tail_constant() const noexcept { return tail_constant_; }

  // -ln Δ(x) for the source map at the chart's ε.
  double source_step_u(double u) const;

 private:
  MapFamilyPtr source_;
  MapFamilyPtr rectified_;
  double eps_u_;
  double tol_;
  double ln_lambda_;
  double tail_constant_ = 0.0;
  RectifyOptions options_;
};

// |ξ(Δ(x)) - ξ(x) - ln Λ|.
double chart_residual(const RectifyingChart& chart, double x);
double chart_residual_u(const RectifyingChart& chart, NegLog u);

// |ξ(x) - ln(-ln x)| * (-ln x) at each x.
std::vector<double> normalization_constants(const RectifyingChart& chart, std::span<const double> xs);

}  // namespace polycycle
