#include "polycycle/map_family.hpp"

#include <cmath>
#include <sstream>

#include "polycycle/errors.hpp"
#include "polycycle/scale.hpp"

namespace polycycle {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double MapFamily::step_u(double eps_u, double u) const {
  if (!(u <= max_representable_neglog())) {
    throw DomainError("model " + describe() + " has no u-scale path for u = " + num(u));
  }
  const double eps = std::isinf(eps_u) ? 0.0 : std::exp(-eps_u);
  const double image = value(eps, std::exp(-u));
  if (!(image > 0.0)) throw DomainError("map image is not positive at u = " + num(u));
  return -std::log(image);
}

std::optional<double> MapFamily::inverse_step_u(double, double) const { return std::nullopt; }

PowerLawModel::PowerLawModel(const PowerLawParams& params) : params_(params) {
  if (!(params.C > 0.0) || !std::isfinite(params.C)) {
    throw InvalidConfig("power_law: C must be positive, got " + num(params.C));
  }
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
    throw InvalidConfig("power_law: Lambda must be positive, got " + num(params.lambda));
  }
  if (!(params.beta > 0.0)) {
    throw InvalidConfig("power_law: beta must be positive, got " + num(params.beta));
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    throw InvalidConfig("power_law: delta must lie in (0, 1), got " + num(params.delta));
  }
  if (!std::isfinite(params.a)) throw InvalidConfig("power_law: a must be finite");
  log_c_ = std::log(params.C);
}

double PowerLawModel::value(double eps, double x) const {
  const auto& p = params_;
  double v = p.C * std::pow(x, p.lambda) * (1.0 + p.a * std::pow(x, p.beta));
  if (p.additive_eps) v += eps;
  return v;
}

double PowerLawModel::d_dx(double, double x) const {
  const auto& p = params_;
  return p.C * (p.lambda * std::pow(x, p.lambda - 1.0) * (1.0 + p.a * std::pow(x, p.beta)) +
                p.a * p.beta * std::pow(x, p.lambda + p.beta - 1.0));
}

double PowerLawModel::d_deps(double, double) const { return params_.additive_eps ? 1.0 : 0.0; }

double PowerLawModel::step_u(double eps_u, double u) const {
  const auto& p = params_;
  double base = p.lambda * u - log_c_;
  if (p.a != 0.0) {
    const double bump = p.a * std::exp(-p.beta * u);
    if (!(bump > -1.0)) {
      throw DomainError("power_law: 1 + a*x^beta <= 0 at x = exp(-" + num(u) + ")");
    }
    base -= std::log1p(bump);
  }
  if (!p.additive_eps) return base;
  return neglog_sum(base, eps_u);
}

std::optional<double> PowerLawModel::inverse_step_u(double eps_u, double target_u) const {
  const auto& p = params_;
  if (p.a != 0.0 || (p.additive_eps && !std::isinf(eps_u))) return std::nullopt;
  return (target_u + log_c_) / p.lambda;
}

std::string PowerLawModel::describe() const {
  const auto& p = params_;
  std::ostringstream os;
  os.precision(6);
  os << "power_law(C=" << p.C << ", Lambda=" << p.lambda << ", a=" << p.a << ", beta=" << p.beta
     << ", additive_eps=" << (p.additive_eps ? "true" : "false") << ", delta=" << p.delta << ")";
  return os.str();
}

MapFamilyPtr make_power_law(const PowerLawParams& params) {
  return std::make_shared<PowerLawModel>(params);
}

InverseMap::InverseMap(MapFamilyPtr base, double eps_u) : base_(std::move(base)), eps_u_(eps_u) {
  if (!base_) throw InvalidConfig("InverseMap: null base map");
  const double delta = base_->domain_radius();
  double image = delta;
  try {
    const double eps = std::isinf(eps_u_) ? 0.0 : std::exp(-eps_u_);
    image = base_->value(eps, std::nextafter(delta, 0.0));
  } catch (const Error&) {
    image = delta;
  }
  radius_ = (image > 0.0 && image < delta) ? image : delta;
}

double InverseMap::step_u(double, double u) const { return invert_step_u(*base_, eps_u_, u); }

std::optional<double> InverseMap::inverse_step_u(double, double target_u) const {
  return base_->step_u(eps_u_, target_u);
}

double InverseMap::value(double, double x) const {
  const double u = step_u(eps_u_, -std::log(x));
  return std::exp(-u);
}

double InverseMap::d_dx(double, double x) const {
  const double eps = std::isinf(eps_u_) ? 0.0 : std::exp(-eps_u_);
  return 1.0 / base_->d_dx(eps, value(0.0, x));
}

double InverseMap::d_deps(double, double) const { return 0.0; }

std::string InverseMap::describe() const { return "inverse(" + base_->describe() + ")"; }

double eval_map(const MapFamily& model, double eps, double x) {
  const double delta = model.domain_radius();
  if (!(x > 0.0 && x < delta)) {
    throw DomainError("eval_map: x = " + num(x) + " outside (0, " + num(delta) + ")");
  }
  if (!(eps >= 0.0 && eps <= x)) {
    throw DomainError("eval_map: (eps, x) = (" + num(eps) + ", " + num(x) +
                      ") outside the angle 0 <= eps <= x");
  }
  const double v = model.value(eps, x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError("eval_map: image " + num(v) + " is not positive at x = " + num(x));
  }
  return v;
}

double iterate_map(const MapFamily& model, double eps, double x, std::int64_t n) {
  if (n < 0) throw DomainError("iterate_map: n must be non-negative");
  const double delta = model.domain_radius();
  if (!(x > 0.0 && x < delta)) {
    throw EscapedDomain(0, "iterate_map: starting point " + num(x) + " outside (0, " +
                               num(delta) + ")");
  }
  double y = x;
  for (std::int64_t k = 1; k <= n; ++k) {
    y = eval_map(model, eps, y);
    if (!(y > 0.0 && y < delta)) {
      throw EscapedDomain(k, "iterate_map: iterate " + std::to_string(k) + " = " + num(y) +
                                 " left (0, " + num(delta) + ")");
    }
  }
  return y;
}

OrbitU iterate_map_u(const MapFamily& model, double eps_u, double u, std::int64_t n) {
  const double u_min = -std::log(model.domain_radius());
  OrbitU orbit{u, 0, -1};
  if (!(u > u_min)) {
    orbit.escaped_at = 0;
    return orbit;
  }
  for (std::int64_t k = 1; k <= n; ++k) {
    const double next = model.step_u(eps_u, orbit.u);
    orbit.u = next;
    orbit.steps = k;
    if (!(next > u_min) || std::isnan(next)) {
      orbit.escaped_at = k;
      return orbit;
    }
  }
  return orbit;
}

double invert_step_u(const MapFamily& model, double eps_u, double target_u) {
  if (auto closed = model.inverse_step_u(eps_u, target_u)) return *closed;
  if (!std::isfinite(target_u)) throw InversionFailure("invert_step_u: non-finite target");

  auto f = [&](double u) { return model.step_u(eps_u, u) - target_u; };
  const double lambda = model.exponent();
  double guess = std::max(target_u / lambda, 1e-300);
  double lo = guess, hi = guess;
  try {
    for (int i = 0; f(lo) > 0.0; ++i) {
      if (i > 2000) throw InversionFailure("invert_step_u: no lower bracket");
      lo *= 0.5;
    }
    for (int i = 0; f(hi) < 0.0; ++i) {
      if (i > 2000 || !std::isfinite(hi)) throw InversionFailure("invert_step_u: no upper bracket");
      hi *= 2.0;
    }
  } catch (const DomainError& e) {
    throw InversionFailure(std::string("invert_step_u: bracketing left the model domain: ") +
                           e.what());
  }
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi || hi - lo <= 1e-14 * hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace polycycle
