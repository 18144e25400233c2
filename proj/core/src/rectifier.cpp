#include "polycycle/rectifier.hpp"

#include <cmath>
#include <sstream>

#include "polycycle/errors.hpp"

namespace polycycle {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ChartPoint rectify_u(const MapFamily& map, NegLog start, double tol, const RectifyOptions& options) {
  const double lambda = map.exponent();
  if (!(lambda > 1.0)) {
    throw DomainError("rectify: exponent must exceed 1, got " + num(lambda) +
                      " (use the inverse route for contracting maps)");
  }
  if (!(tol > 0.0)) throw DomainError("rectify: tol must be positive");
  const double u_min = -std::log(map.domain_radius());
  const double u0 = start.u;
  if (!(u0 > u_min) || !std::isfinite(u0)) {
    throw DomainError("rectify: x = exp(-" + num(u0) + ") outside (0, " + num(map.domain_radius()) + ")");
  }

  const double ln_lambda = std::log(lambda);
  const double root = std::sqrt(lambda);
  const double geometric = root / (root - 1.0);

  ChartPoint out;
  double u = u0;
  double xi = std::log(u0);
  for (std::int64_t n = 0; n < options.step_budget; ++n) {
    const double next = map.step_u(kZeroEpsU, u);
    if (!(next > u_min) || !std::isfinite(next)) {
      throw NonContracting("rectify: iterate " + std::to_string(n + 1) + " left the domain (u = " +
                           num(next) + ") starting from u = " + num(u0));
    }
    const double xi_next = std::log(next) - static_cast<double>(n + 1) * ln_lambda;
    out.tail_constant = std::max(out.tail_constant, std::fabs(xi_next - xi) * u);
    xi = xi_next;
    out.xi = xi;
    out.steps = n + 1;
    // Past this point -ln Δ^m grows at least geometrically with ratio √Λ, so
    // the remaining increments sum to at most C/(-ln Δ^{n+1}) * √Λ/(√Λ - 1).
    if (next >= root * u && out.steps >= options.min_steps) {
      out.tail_bound = options.safety * out.tail_constant / next * geometric;
      if (out.tail_bound < tol) return out;
    }
    u = next;
  }
  throw NonContracting("rectify: no convergence within " + std::to_string(options.step_budget) +
                       " steps from u = " + num(u0));
}

double rectify(const MapFamily& map, double x, double tol, const RectifyOptions& options) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("rectify: x must lie in (0, 1)");
  return rectify_u(map, NegLog{-std::log(x)}, tol, options).xi;
}

double rectify_contracting_inverse(const MapFamilyPtr& map, double x, double tol, double eps_u,
                                   const RectifyOptions& options) {
  return RectifyingChart(map, tol, options, eps_u)(x);
}

RectifyingChart::RectifyingChart(MapFamilyPtr map, double tol, RectifyOptions options, double eps_u)
    : source_(std::move(map)), eps_u_(eps_u), tol_(tol), options_(options) {
  if (!source_) throw InvalidConfig("RectifyingChart: null map");
  if (!(tol > 0.0)) throw DomainError("RectifyingChart: tol must be positive");
  const double lambda = source_->exponent();
  if (lambda == 1.0) throw DomainError("RectifyingChart: exponent 1 has no rectifying chart");
  ln_lambda_ = std::log(lambda);
  if (lambda > 1.0) {
    if (source_->depends_on_eps() && !std::isinf(eps_u)) {
      throw DomainError("RectifyingChart: charts of expanding maps are built at eps = 0");
    }
    rectified_ = source_;
  } else {
    rectified_ = std::make_shared<InverseMap>(source_, eps_u);
  }
  const double delta = rectified_->domain_radius();
  for (double fraction : {0.5, 1.0 / 16.0, 1.0 / 256.0}) {
    tail_constant_ = std::max(tail_constant_, at_u(NegLog{-std::log(delta * fraction)}).tail_constant);
  }
}

ChartPoint RectifyingChart::at_u(NegLog u) const { return rectify_u(*rectified_, u, tol_, options_); }

double RectifyingChart::operator()(double x) const {
  if (!(x > 0.0 && x < domain_radius())) {
    throw DomainError("chart: x = " + num(x) + " outside (0, " + num(domain_radius()) + ")");
  }
  return at_u(NegLog{-std::log(x)}).xi;
}

double RectifyingChart::source_step_u(double u) const { return source_->step_u(eps_u_, u); }

double chart_residual_u(const RectifyingChart& chart, NegLog u) {
  const double u_min = -std::log(chart.domain_radius());
  if (!(u.u > u_min)) throw DomainError("chart_residual: x outside the chart domain");
  const double image = chart.source_step_u(u.u);
  if (!(image > u_min) || !std::isfinite(image)) {
    throw DomainError("chart_residual: Δ(x) outside the chart domain");
  }
  return std::fabs(chart.at_u(NegLog{image}).xi - chart.at_u(u).xi - chart.ln_lambda());
}

double chart_residual(const RectifyingChart& chart, double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("chart_residual: x must lie in (0, 1)");
  return chart_residual_u(chart, NegLog{-std::log(x)});
}

std::vector<double> normalization_constants(const RectifyingChart& chart, std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const double u = -std::log(x);
    out.push_back(std::fabs(chart(x) - std::log(u)) * u);
  }
  return out;
}

}  // namespace polycycle
