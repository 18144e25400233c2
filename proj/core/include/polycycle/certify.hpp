#pragma once

// Grid certification of the bound contract a map family must satisfy before
// the sparkler and rectifier results apply to it:
//
//   c x^Λ < Δ_ε(x) < C x^Λ,   c Δ_ε(x)/x < D_xΔ_ε(x) < C Δ_ε(x)/x,
//   1/2 < D_εΔ_ε(x) < 2        on 0 <= ε <= x < δ,
//
// plus spot checks of the iterate bounds that follow from them.

#include <cstdint>
#include <string>
#include <vector>

#include "polycycle/map_family.hpp"

namespace polycycle {

struct GridSpec {
  double x_min = 1e-12;
  int points_per_decade = 64;
  int eps_per_x = 16;
  // Λ' in (Λ, 1) for the ε-derivative and perturbation checks; 0 = (Λ + 1)/2.
  double lambda_prime = 0.0;
  // Upper end of the region where the Λ' checks apply; 0 = δ.
  double small_x_max = 0.0;
  int max_iterates = 64;
  // Relative slack put between the grid extrema and the reported (c, C).
  double margin = 1e-4;
  // Random log-scale jitter of the x grid, as a fraction of one grid step.
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

enum class CheckStatus { Pass, Fail, Exempt, NotApplicable };

std::string to_string(CheckStatus s);

struct CheckTally {
  std::string property;
  CheckStatus status = CheckStatus::Pass;
  std::int64_t checked = 0;
  std::int64_t failed = 0;
  std::string note;
};

struct RatioExtrema {
  double map_min = 0, map_max = 0;      // Δ/x^Λ
  double dx_min = 0, dx_max = 0;        // x D_xΔ/Δ
  double deps_min = 0, deps_max = 0;    // D_εΔ
};

struct EstimateCertificate {
  std::string model;
  double lambda = 0;
  double c = 0;
  double C = 0;
  double delta = 0;
  double lambda_prime = 0;
  std::int64_t grid_size = 0;
  RatioExtrema worst_ratios;
  std::vector<CheckTally> checks;
  std::vector<std::string> failures;    // first few concrete counterexamples
  std::vector<std::string> exemptions;
  bool pass = false;

  const CheckTally* find(const std::string& property) const;
};

// Property names used in EstimateCertificate::checks.
namespace property {
inline constexpr const char* kMapBounds = "map_bounds";
inline constexpr const char* kLogDerivativeBounds = "log_derivative_bounds";
inline constexpr const char* kEpsDerivativeBounds = "eps_derivative_bounds";
inline constexpr const char* kMonotone = "strictly_increasing";
inline constexpr const char* kIterateBounds = "iterate_bounds";
inline constexpr const char* kIterateDerivativeBounds = "iterate_derivative_bounds";
inline constexpr const char* kIterateEpsDerivative = "iterate_eps_derivative_bounds";
inline constexpr const char* kPerturbationDistance = "perturbation_distance";
}  // namespace property

std::vector<double> certification_x_grid(double delta, const GridSpec& grid);

EstimateCertificate certify_estimates(const MapFamily& model, const GridSpec& grid = {});

// Models that ship with the library, by name.
struct NamedModel {
  std::string name;
  PowerLawParams params;
};
std::vector<NamedModel> shipped_models();

}  // namespace polycycle
