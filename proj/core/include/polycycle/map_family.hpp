#pragma once

// One-parameter families of increasing one-dimensional maps x -> Δ_ε(x) on
// (0, δ), together with the u-scale (u = -ln x) evaluation path used once x
// leaves the double range.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace polycycle {

// ε = 0 on the u-scale.
inline constexpr double kZeroEpsU = std::numeric_limits<double>::infinity();

class MapFamily {
 public:
  virtual ~MapFamily() = default;

  // Λ in Δ_ε(x) = x^Λ e^{O(1)}.
  virtual double exponent() const noexcept = 0;
  // δ: the map is defined for 0 < x < δ.
  virtual double domain_radius() const noexcept = 0;
  virtual bool depends_on_eps() const noexcept = 0;

  // Raw formulas, no domain checks.
  virtual double value(double eps, double x) const = 0;
  virtual double d_dx(double eps, double x) const = 0;
  virtual double d_deps(double eps, double x) const = 0;

  // -ln Δ_ε(exp(-u)) with ε = exp(-eps_u); eps_u = kZeroEpsU encodes ε = 0.
  // The default goes through value() and only works while exp(-u) is a
  // normal double; models meant for deep iteration override it.
  virtual double step_u(double eps_u, double u) const;

  // Closed-form inverse of step_u in u, when the model has one.
  virtual std::optional<double> inverse_step_u(double eps_u, double target_u) const;

  virtual std::string describe() const = 0;
};

using MapFamilyPtr = std::shared_ptr<const MapFamily>;

// Δ_ε(x) = C x^Λ (1 + a x^β) + [additive_eps] ε.
struct PowerLawParams {
  double C = 1.0;
  double lambda = 0.5;
  double a = 0.0;
  double beta = 1.0;
  bool additive_eps = false;
  double delta = 0.5;
};

class PowerLawModel final : public MapFamily {
 public:
  explicit PowerLawModel(const PowerLawParams& params);

  const PowerLawParams& params() const noexcept { return params_; }

  double exponent() const noexcept override { return params_.lambda; }
  double domain_radius() const noexcept override { return params_.delta; }
  bool depends_on_eps() const noexcept override { return params_.additive_eps; }

  double value(double eps, double x) const override;
  double d_dx(double eps, double x) const override;
  double d_deps(double eps, double x) const override;
  double step_u(double eps_u, double u) const override;
  std::optional<double> inverse_step_u(double eps_u, double target_u) const override;
  std::string describe() const override;

 private:
  PowerLawParams params_;
  double log_c_;
};

MapFamilyPtr make_power_law(const PowerLawParams& params);

// Δ_ε^{-1} at a fixed ε, with exponent 1/Λ. Defined on (0, min(δ, Δ_ε(δ))),
// where it maps into (0, δ).
class InverseMap final : public MapFamily {
 public:
  InverseMap(MapFamilyPtr base, double eps_u = kZeroEpsU);

  const MapFamily& base() const noexcept { return *base_; }

  double exponent() const noexcept override { return 1.0 / base_->exponent(); }
  double domain_radius() const noexcept override { return radius_; }
  bool depends_on_eps() const noexcept override { return false; }

  double value(double eps, double x) const override;
  double d_dx(double eps, double x) const override;
  double d_deps(double eps, double x) const override;
  double step_u(double eps_u, double u) const override;
  std::optional<double> inverse_step_u(double eps_u, double target_u) const override;
  std::string describe() const override;

 private:
  MapFamilyPtr base_;
  double eps_u_;
  double radius_;
};

// Δ_ε(x), requiring 0 <= ε <= x < δ and a positive image.
double eval_map(const MapFamily& model, double eps, double x);

// Δ_ε^n(x). Throws EscapedDomain naming the first k with Δ_ε^k(x) outside (0, δ).
double iterate_map(const MapFamily& model, double eps, double x, std::int64_t n);

struct OrbitU {
  double u = 0.0;                 // -ln of the last computed iterate
  std::int64_t steps = 0;         // iterates computed
  std::int64_t escaped_at = -1;   // first k with Δ^k(x) >= δ, or -1

  bool escaped() const noexcept { return escaped_at >= 0; }
};

// Δ_ε^n on the u-scale. Stops early (without throwing) at the first iterate
// that leaves (0, δ).
OrbitU iterate_map_u(const MapFamily& model, double eps_u, double u, std::int64_t n);

// Solves step_u(eps_u, u) = target_u for u; closed form when available,
// otherwise bisection to relative 1e-14. Throws InversionFailure.
double invert_step_u(const MapFamily& model, double eps_u, double target_u);

}  // namespace polycycle
