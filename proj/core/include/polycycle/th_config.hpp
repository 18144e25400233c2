#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "polycycle/map_family.hpp"

namespace polycycle {

// Decaying o(1) term r * q^n injected into synthetic spark tables.
struct Perturbation {
  double r = 0.0;
  double q = 0.5;

  double at(double index) const;
};

// Map families for model mode. Both are given in the contracting form
// (exponent < 1): the interior return map, and the inverse of the exterior
// one, whose exponent is 1/Λ_e. I and E are the target points on the x-scale.
struct ModelAttachment {
  MapFamilyPtr interior;
  MapFamilyPtr exterior;
  double I = 0.0;
  std::vector<double> E;
};

// Abstract scenario of a polycycle with one loop (interior side) and N
// exterior separatrices.
struct THConfig {
  double lambda_i = 0.5;    // Λ_i in (0, 1)
  double lambda_e = 1.25;   // Λ_e > 1
  std::vector<double> xi_E; // ξ_e(E_1) < ... < ξ_e(E_N) < ξ_e(E_1) + ln Λ_e
  std::vector<double> xi_I; // ξ_i(I_1) < ... < ξ_i(I_K) < ξ_i(I_1) - ln Λ_i
  std::optional<Perturbation> perturbation;
  std::optional<ModelAttachment> models;

  std::size_t N() const noexcept { return xi_E.size(); }
  std::size_t K() const noexcept { return xi_I.size(); }

  // Λ_i = λ, Λ_e = λ²μ from the characteristic numbers of the two saddles.
  static THConfig from_saddles(double lambda, double mu, std::vector<double> xi_E, std::vector<double> xi_I);
};

// Throws InvalidConfig naming the violated condition.
void validate(const THConfig& config);

// Model mode: fills xi_E and xi_I from the rectifying charts of the attached
// maps (and checks Λ_i, Λ_e against the model exponents).
THConfig resolve_model_charts(THConfig config, double tol = 1e-12);

}  // namespace polycycle
