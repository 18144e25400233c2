#include "polycycle/th_config.hpp"

#include <cmath>
#include <sstream>

#include "polycycle/errors.hpp"
#include "polycycle/rectifier.hpp"

namespace polycycle {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_cyclic_order(const std::vector<double>& xs, double period, const char* name) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw InvalidConfig(std::string(name) + " contains a non-finite value");
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw InvalidConfig(std::string(name) + " must be strictly increasing (fundamental-domain order), "
                          "violated at index " + std::to_string(i));
    }
  }
  if (!(xs.back() < xs.front() + period)) {
    throw InvalidConfig(std::string(name) + ": last value " + num(xs.back()) +
                        " must be below first value + period = " + num(xs.front() + period));
  }
}

}  // namespace

double Perturbation::at(double index) const { return r == 0.0 ? 0.0 : r * std::pow(q, index); }

THConfig THConfig::from_saddles(double lambda, double mu, std::vector<double> xi_E, std::vector<double> xi_I) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidConfig("characteristic numbers must be positive");
  THConfig c;
  c.lambda_i = lambda;
  c.lambda_e = lambda * lambda * mu;
  c.xi_E = std::move(xi_E);
  c.xi_I = std::move(xi_I);
  return c;
}

void validate(const THConfig& config) {
  if (!(config.lambda_i > 0.0 && config.lambda_i < 1.0)) {
    throw InvalidConfig("Lambda_i must lie in (0, 1), got " + num(config.lambda_i));
  }
  if (!(config.lambda_e > 1.0) || !std::isfinite(config.lambda_e)) {
    throw InvalidConfig("Lambda_e must exceed 1, got " + num(config.lambda_e));
  }
  if (config.xi_E.empty()) throw InvalidConfig("xi_E must hold at least one chart value");
  if (config.xi_I.empty()) throw InvalidConfig("xi_I must hold at least one chart value");
  check_cyclic_order(config.xi_E, std::log(config.lambda_e), "xi_E");
  check_cyclic_order(config.xi_I, -std::log(config.lambda_i), "xi_I");
  if (config.perturbation) {
    const auto& p = *config.perturbation;
    if (!std::isfinite(p.r)) throw InvalidConfig("perturbation.r must be finite");
    if (!(p.q >= 0.0 && p.q < 1.0)) throw InvalidConfig("perturbation.q must lie in [0, 1)");
  }
  if (config.models) {
    const auto& m = *config.models;
    if (!m.interior || !m.exterior) throw InvalidConfig("models: interior and exterior maps are required");
    if (m.E.size() != config.xi_E.size()) throw InvalidConfig("models: E and xi_E differ in length");
  }
}

THConfig resolve_model_charts(THConfig config, double tol) {
  if (!config.models) return config;
  auto& m = *config.models;
  if (!m.interior || !m.exterior) throw InvalidConfig("models: interior and exterior maps are required");
  const double li = m.interior->exponent();
  const double le_inv = m.exterior->exponent();
  if (!(li < 1.0)) throw InvalidConfig("models.interior: exponent must be below 1");
  if (!(le_inv < 1.0)) {
    throw InvalidConfig("models.exterior: give the inverse exterior map (exponent 1/Lambda_e < 1)");
  }
  if (std::fabs(config.lambda_i - li) > 1e-12 * li) {
    throw InvalidConfig("Lambda_i = " + num(config.lambda_i) + " disagrees with the interior model exponent " + num(li));
  }
  if (std::fabs(config.lambda_e * le_inv - 1.0) > 1e-12) {
    throw InvalidConfig("Lambda_e = " + num(config.lambda_e) + " disagrees with the exterior model exponent 1/" +
                        num(1.0 / le_inv));
  }
  config.lambda_i = li;
  config.lambda_e = 1.0 / le_inv;
  if (m.E.empty()) throw InvalidConfig("models.E must hold at least one point");

  const RectifyingChart interior(m.interior, tol);
  const RectifyingChart exterior(m.exterior, tol);
  config.xi_I = {interior(m.I)};
  config.xi_E.clear();
  for (double e : m.E) config.xi_E.push_back(exterior(e));
  validate(config);
  return config;
}

}  // namespace polycycle
