#include "polycycle/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "polycycle/errors.hpp"
#include "polycycle/parallel.hpp"

namespace polycycle {

namespace {

constexpr std::size_t kMaxFailuresReported = 8;

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

struct Tally {
  std::int64_t checked = 0;
  std::int64_t failed = 0;
};

// Per-x partial result; merged in x order so the certificate does not depend
// on the schedule.
struct Partial {
  RatioExtrema ratios{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::map<std::string, Tally> tallies;
  std::vector<std::string> failures;
  std::int64_t points = 0;

  void fail(const std::string& property, std::string message) {
    ++tallies[property].failed;
    if (failures.size() < kMaxFailuresReported) failures.push_back(property + ": " + std::move(message));
  }
  void check(const std::string& property) { ++tallies[property].checked; }
};

std::vector<double> eps_values(const MapFamily& model, double x, const GridSpec& grid) {
  if (!model.depends_on_eps() || grid.eps_per_x < 2) return {0.0};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.eps_per_x));
  for (int j = 0; j < grid.eps_per_x; ++j) {
    out.push_back(x * static_cast<double>(j) / static_cast<double>(grid.eps_per_x - 1));
  }
  out.back() = x;
  return out;
}

void single_step(const MapFamily& model, double x, const GridSpec& grid, Partial& out) {
  const double lambda = model.exponent();
  for (double eps : eps_values(model, x, grid)) {
    ++out.points;
    const std::string where = " at (eps, x) = (" + num(eps) + ", " + num(x) + ")";
    out.check(property::kMapBounds);
    double v = 0.0;
    try {
      v = model.value(eps, x);
    } catch (const Error& e) {
      out.fail(property::kMapBounds, std::string(e.what()) + where);
      continue;
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.fail(property::kMapBounds, "image " + num(v) + " not positive" + where);
      continue;
    }
    const double r_map = std::exp(std::log(v) - lambda * std::log(x));
    out.ratios.map_min = std::min(out.ratios.map_min, r_map);
    out.ratios.map_max = std::max(out.ratios.map_max, r_map);

    out.check(property::kMonotone);
    out.check(property::kLogDerivativeBounds);
    const double d = model.d_dx(eps, x);
    if (!(d > 0.0) || !std::isfinite(d)) {
      out.fail(property::kMonotone, "D_x = " + num(d) + where);
      out.fail(property::kLogDerivativeBounds, "D_x = " + num(d) + where);
    } else {
      const double r_dx = d * x / v;
      out.ratios.dx_min = std::min(out.ratios.dx_min, r_dx);
      out.ratios.dx_max = std::max(out.ratios.dx_max, r_dx);
    }

    const double de = model.d_deps(eps, x);
    out.ratios.deps_min = std::min(out.ratios.deps_min, de);
    out.ratios.deps_max = std::max(out.ratios.deps_max, de);
    if (model.depends_on_eps()) {
      out.check(property::kEpsDerivativeBounds);
      if (!(de > 0.5 && de < 2.0)) out.fail(property::kEpsDerivativeBounds, "D_eps = " + num(de) + where);
    }
  }
}

struct IterateContext {
  double c, C, lambda_prime, small_x_max;
  bool iterate_bounds, eps_checks;
};

void iterate_checks(const MapFamily& model, double x, const GridSpec& grid,
                    const IterateContext& ctx, Partial& out) {
  const double lambda = model.exponent();
  const double delta = model.domain_radius();
  const double ln_x = std::log(x);
  const double ln_c = std::log(ctx.c);
  const double ln_cap = std::log(ctx.C);
  const bool eps_here = ctx.eps_checks && x < ctx.small_x_max;

  for (double eps : eps_values(model, x, grid)) {
    const std::string where = " from (eps, x) = (" + num(eps) + ", " + num(x) + ")";
    double y = x;      // Δ_ε^n(x)
    double z = x;      // Δ_0^n(x)
    double ln_dx = 0;  // ln D_xΔ_ε^n(x)
    double d_eps = 0;  // D_εΔ_ε^n(x)
    double lambda_n = 1;
    try {
      for (int n = 1; n <= grid.max_iterates; ++n) {
        const double next = model.value(eps, y);
        if (!(next > 0.0) || !(next < delta)) break;
        if (lambda > 1.0 && next < 1e-280) break;
        const double dx = model.d_dx(eps, y);
        ln_dx += std::log(dx);
        d_eps = dx * d_eps + model.d_deps(eps, y);
        y = next;
        lambda_n *= lambda;
        const double ln_y = std::log(y);
        const std::string at = " n = " + std::to_string(n) + where;

        if (ctx.iterate_bounds) {
          out.check(property::kIterateBounds);
          const double lo = ln_c / (1.0 - lambda) + lambda_n * ln_x;
          const double hi = ln_cap / (1.0 - lambda) + lambda_n * ln_x;
          if (!(ln_y > lo && ln_y < hi)) {
            out.fail(property::kIterateBounds, "ln Δ^n = " + num(ln_y) + " outside (" + num(lo) +
                                                   ", " + num(hi) + ")" + at);
          }
        }

        out.check(property::kIterateDerivativeBounds);
        const double base = ln_y - ln_x;
        const double dlo = n * ln_c + base;
        const double dhi = n * ln_cap + base;
        if (!(ln_dx > dlo && ln_dx < dhi)) {
          out.fail(property::kIterateDerivativeBounds,
                   "ln D_xΔ^n = " + num(ln_dx) + " outside (" + num(dlo) + ", " + num(dhi) + ")" + at);
        }

        if (eps_here) {
          const double cap = -ctx.lambda_prime * ln_x;  // ln x^{-Λ'}
          out.check(property::kIterateEpsDerivative);
          if (!(d_eps > 0.0 && std::log(d_eps) < cap)) {
            out.fail(property::kIterateEpsDerivative,
                     "D_epsΔ^n = " + num(d_eps) + " not in (0, x^-Λ' = " + num(std::exp(cap)) + ")" + at);
          }
          if (eps > 0.0) {
            z = model.value(0.0, z);
            const double diff = y - z;
            const double bound = eps * std::exp(cap);
            out.check(property::kPerturbationDistance);
            if (!(diff > 0.0 && diff < bound)) {
              out.fail(property::kPerturbationDistance,
                       "Δ_eps^n - Δ_0^n = " + num(diff) + " not in (0, " + num(bound) + ")" + at);
            }
          }
        }
      }
    } catch (const Error& e) {
      out.fail(property::kIterateBounds, std::string(e.what()) + where);
    }
  }
}

Partial merge(std::vector<Partial>& parts) {
  Partial total;
  for (auto& p : parts) {
    total.points += p.points;
    total.ratios.map_min = std::min(total.ratios.map_min, p.ratios.map_min);
    total.ratios.map_max = std::max(total.ratios.map_max, p.ratios.map_max);
    total.ratios.dx_min = std::min(total.ratios.dx_min, p.ratios.dx_min);
    total.ratios.dx_max = std::max(total.ratios.dx_max, p.ratios.dx_max);
    total.ratios.deps_min = std::min(total.ratios.deps_min, p.ratios.deps_min);
    total.ratios.deps_max = std::max(total.ratios.deps_max, p.ratios.deps_max);
    for (auto& [name, t] : p.tallies) {
      total.tallies[name].checked += t.checked;
      total.tallies[name].failed += t.failed;
    }
    for (auto& f : p.failures) {
      if (total.failures.size() < kMaxFailuresReported) total.failures.push_back(std::move(f));
    }
  }
  return total;
}

CheckTally tally_of(const Partial& p, const std::string& name) {
  CheckTally t{name, CheckStatus::Pass, 0, 0, {}};
  if (auto it = p.tallies.find(name); it != p.tallies.end()) {
    t.checked = it->second.checked;
    t.failed = it->second.failed;
  }
  if (t.failed > 0) t.status = CheckStatus::Fail;
  return t;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Exempt: return "exempt";
    case CheckStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

const CheckTally* EstimateCertificate::find(const std::string& name) const {
  for (const auto& t : checks) {
    if (t.property == name) return &t;
  }
  return nullptr;
}

std::vector<double> certification_x_grid(double delta, const GridSpec& grid) {
  if (!(grid.x_min > 0.0) || !(grid.x_min < delta) || grid.points_per_decade < 1) {
    throw DomainError("certify: empty grid (need 0 < x_min < delta and points_per_decade >= 1)");
  }
  std::vector<double> xs;
  const double step = std::log(10.0) / grid.points_per_decade;
  std::mt19937_64 rng(grid.seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  for (int j = 0;; ++j) {
    double ln_x = std::log(grid.x_min) + j * step;
    if (grid.jitter > 0.0) ln_x += grid.jitter * step * unit(rng);
    const double x = std::exp(ln_x);
    if (x >= delta) break;
    xs.push_back(x);
  }
  // The supremum of most ratios sits at the right edge, which a log grid
  // never reaches.
  xs.push_back(delta * (1.0 - 1e-9));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

EstimateCertificate certify_estimates(const MapFamily& model, const GridSpec& grid) {
  const double delta = model.domain_radius();
  const double lambda = model.exponent();
  const std::vector<double> xs = certification_x_grid(delta, grid);
  if (xs.empty() || grid.eps_per_x < 1) throw DomainError("certify: empty grid");

  EstimateCertificate cert;
  cert.model = model.describe();
  cert.lambda = lambda;
  cert.delta = delta;
  cert.lambda_prime = grid.lambda_prime > 0.0 ? grid.lambda_prime : 0.5 * (lambda + 1.0);

  std::vector<Partial> first(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { single_step(model, xs[i], grid, first[i]); });
  Partial step = merge(first);
  cert.grid_size = step.points;
  cert.worst_ratios = step.ratios;

  const double c_raw = std::min(step.ratios.map_min, step.ratios.dx_min);
  const double cap_raw = std::max(step.ratios.map_max, step.ratios.dx_max);
  cert.c = std::min(c_raw, 1.0) * (1.0 - grid.margin);
  cert.C = std::max(cap_raw, 1.0) * (1.0 + grid.margin);
  const bool constants_ok = cert.c > 0.0 && std::isfinite(cert.c) && std::isfinite(cert.C);

  for (const char* name : {property::kMapBounds, property::kMonotone, property::kLogDerivativeBounds}) {
    cert.checks.push_back(tally_of(step, name));
  }
  if (model.depends_on_eps()) {
    cert.checks.push_back(tally_of(step, property::kEpsDerivativeBounds));
  } else {
    CheckTally t{property::kEpsDerivativeBounds, CheckStatus::Exempt, 0, 0,
                 "map does not depend on eps (D_eps ≡ 0 violates 1/2 < D_eps < 2); "
                 "valid only for uses with eps fixed at 0"};
    cert.exemptions.push_back(std::string(property::kEpsDerivativeBounds) + ": " + t.note);
    cert.checks.push_back(t);
  }
  cert.failures = step.failures;

  const bool contracting = lambda < 1.0;
  const bool eps_checks = contracting && model.depends_on_eps();
  if (constants_ok && step.tallies[property::kMapBounds].failed == 0 &&
      step.tallies[property::kLogDerivativeBounds].failed == 0) {
    IterateContext ctx{cert.c, cert.C, cert.lambda_prime,
                       grid.small_x_max > 0.0 ? grid.small_x_max : delta, contracting, eps_checks};
    std::vector<Partial> second(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { iterate_checks(model, xs[i], grid, ctx, second[i]); });
    Partial iter = merge(second);
    for (auto& f : iter.failures) {
      if (cert.failures.size() < kMaxFailuresReported) cert.failures.push_back(std::move(f));
    }

    if (contracting) {
      cert.checks.push_back(tally_of(iter, property::kIterateBounds));
    } else {
      cert.checks.push_back({property::kIterateBounds, CheckStatus::NotApplicable, 0, 0,
                             "iterate bounds c^(1/(1-Λ)) x^(Λ^n) < Δ^n < C^(1/(1-Λ)) x^(Λ^n) need Λ < 1"});
    }
    cert.checks.push_back(tally_of(iter, property::kIterateDerivativeBounds));
    for (const char* name : {property::kIterateEpsDerivative, property::kPerturbationDistance}) {
      if (eps_checks) {
        cert.checks.push_back(tally_of(iter, name));
      } else if (!contracting) {
        cert.checks.push_back({name, CheckStatus::NotApplicable, 0, 0, "needs Λ < 1"});
      } else {
        CheckTally t{name, CheckStatus::Exempt, 0, 0, "map does not depend on eps"};
        cert.exemptions.push_back(std::string(name) + ": " + t.note);
        cert.checks.push_back(t);
      }
    }
  } else {
    for (const char* name : {property::kIterateBounds, property::kIterateDerivativeBounds,
                             property::kIterateEpsDerivative, property::kPerturbationDistance}) {
      cert.checks.push_back({name, CheckStatus::Fail, 0, 0, "skipped: single-step bounds failed"});
    }
  }

  cert.pass = constants_ok && std::none_of(cert.checks.begin(), cert.checks.end(), [](const CheckTally& t) {
                return t.status == CheckStatus::Fail;
              });
  return cert;
}

std::vector<NamedModel> shipped_models() {
  return {
      {"sqrt_additive", {1.0, 0.5, 0.0, 1.0, true, 0.5}},
      {"pure_power_half", {1.0, 0.5, 0.0, 1.0, false, 0.5}},
      {"perturbed_half_additive", {1.0, 0.5, 0.1, 1.0, true, 0.5}},
      {"exterior_inverse_additive", {1.0, 0.8, 0.0, 1.0, true, 0.5}},
      {"quadratic_doubling", {2.0, 2.0, 0.0, 1.0, false, 0.25}},
      {"perturbed_quadratic", {1.5, 2.0, 0.1, 1.0, false, 0.25}},
  };
}

}  // namespace polycycle
