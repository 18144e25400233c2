#pragma once

// Invariants of a TH scenario: φ = ln Λ_e / (-ln Λ_i), the arc vector Φ on
// the exterior circle, the projective class [Φ:Ψ] and the verdict checker.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polycycle/continued_fraction.hpp"
#include "polycycle/th_config.hpp"

namespace polycycle {

struct InvariantVector {
  double phi = 0.0;
  std::vector<double> Phi;
  // Set when φ matches a fraction p/q with q <= q_max.
  std::optional<Fraction> fraction;

  std::size_t N() const noexcept { return Phi.size(); }
  std::optional<std::int64_t> q() const {
    if (!fraction) return std::nullopt;
    return fraction->q;
  }
};

double phi_of(const THConfig& config);

InvariantVector invariant_vector(const THConfig& config, std::int64_t q_max = kDefaultMaxDenominator,
                                 double rational_tol = kDefaultRationalTolerance);

// Builds an invariant vector from arc lengths directly; φ = Σ Φ_k.
InvariantVector invariant_vector_from_arcs(std::vector<double> Phi, std::int64_t q_max = kDefaultMaxDenominator,
                                           double rational_tol = kDefaultRationalTolerance);

// [Φ_1 : ... : Φ_N : Ψ_1 : ... : Ψ_K] without rescaling, normalized so that
// the first coordinate is 1. The interior circle closes with
// ξ_i(I_{K+1}) = ξ_i(I_1) - ln Λ_i.
std::vector<double> projective_invariant(const THConfig& config);

// Normalizes an arbitrary representative; throws DegenerateClass.
std::vector<double> normalize_projective(std::vector<double> coords);

enum class Regime { Auto, Irrational, Rational };

enum class Verdict { Inequivalent, NotDistinguished };

enum class Obstruction { None, PhiMismatch, ArcMismatch, ArcMismatchRational };

std::string to_string(Verdict v);
std::string to_string(Obstruction o);

struct VerdictResult {
  Verdict verdict = Verdict::NotDistinguished;
  Obstruction reason = Obstruction::None;
  std::size_t arc = 0;        // 1-based k of the offending arc, 0 if none
  double difference = 0.0;    // the offending difference
  double threshold = 0.0;     // what it was compared against
  std::optional<std::int64_t> q;
  std::string message;
};

inline constexpr double kDefaultVerdictTolerance = 1e-9;

// Regime::Auto uses the detected fractions: both rational with the same q, or
// both without one. Anything else is ambiguous and throws DomainError; the
// caller must then pick the regime. For Regime::Rational, q comes from
// `q_override`, then from either vector.
VerdictResult equivalence_verdict(const InvariantVector& a, const InvariantVector& b,
                                  double tol = kDefaultVerdictTolerance, Regime regime = Regime::Auto,
                                  std::optional<std::int64_t> q_override = std::nullopt);

}  // namespace polycycle
