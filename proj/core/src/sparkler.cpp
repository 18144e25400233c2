#include "polycycle/sparkler.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "polycycle/csv.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/parallel.hpp"
#include "polycycle/rectifier.hpp"

namespace polycycle {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Beyond this ξ the initial point exp(-exp(ξ)) has u past ~1e300.
constexpr double kXiCeiling = 690.0;

double target_u(const SparkProblem& problem, double eps) {
  const double p = problem.target(eps);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("spark: target P(eps) = " + num(p) + " outside (0, 1)");
  return -std::log(p);
}

// Δ_0^{-k}(P(0)) must run off to 0, i.e. u must keep growing.
void check_basin(const MapFamily& model, double u0) {
  double u = u0;
  for (int k = 0; k < 200; ++k) {
    double prev_image = u;
    try {
      u = invert_step_u(model, kZeroEpsU, u);
    } catch (const Error& e) {
      throw DomainError("spark: P(0) is not in the basin of 0 under the inverse map: " + std::string(e.what()));
    }
    if (!(u > prev_image)) {
      throw DomainError("spark: P(0) = exp(-" + num(u0) +
                        ") is not in the basin of 0 under the inverse map (inverse iterate " +
                        std::to_string(k + 1) + " does not move toward 0)");
    }
    if (u > 64.0 * u0 && u > 100.0) return;
  }
  throw DomainError("spark: inverse iterates of P(0) do not approach 0 within 200 steps");
}

}  // namespace

TargetFunction constant_target(double value) {
  return [value](double) { return value; };
}

int spark_sign(const SparkProblem& problem, double xi) {
  const MapFamily& model = *problem.model;
  const double eps_u = std::exp(xi);
  if (!(eps_u > 0.0)) return 1;  // ε indistinguishable from 1
  const double u_min = -std::log(model.domain_radius());
  if (!(eps_u > u_min)) return 1;
  const double eps = x_from_xi(LogLogCoord{xi}).value_or(0.0);
  const double goal = target_u(problem, eps);
  if (std::isinf(eps_u)) return -1;
  const OrbitU orbit = iterate_map_u(model, eps_u, eps_u, problem.n);
  if (orbit.escaped()) return 1;
  if (orbit.u < goal) return 1;
  if (orbit.u > goal) return -1;
  return 0;
}

int count_sign_changes(const SparkProblem& problem, double lo, double hi, int samples) {
  if (samples < 2) throw DomainError("count_sign_changes: need at least two samples");
  int changes = 0;
  int last = 0;
  for (int i = 0; i < samples; ++i) {
    const double xi = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const int s = spark_sign(problem, xi);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

SparkRoot solve_spark(const SparkProblem& problem, double tol, const SparkOptions& options) {
  if (!problem.model) throw InvalidConfig("spark: null model");
  if (!problem.target) throw InvalidConfig("spark: null target");
  if (problem.n < 1) throw DomainError("spark: n >= 1 required, got " + std::to_string(problem.n));
  if (!(tol > 0.0)) throw DomainError("spark: tol must be positive");
  const MapFamily& model = *problem.model;
  const double lambda = model.exponent();
  if (!(lambda < 1.0)) throw DomainError("spark: the model exponent must be below 1, got " + num(lambda));

  const double p0 = problem.target(0.0);
  if (!(p0 > 0.0 && p0 < model.domain_radius())) {
    throw DomainError("spark: P(0) = " + num(p0) + " outside (0, " + num(model.domain_radius()) + ")");
  }
  const double u_p0 = -std::log(p0);
  check_basin(model, u_p0);

  const double center = static_cast<double>(problem.n) * -std::log(lambda) + std::log(u_p0);
  // ε < δ, i.e. ξ > ln(-ln δ).
  const double floor_xi = std::log(-std::log(model.domain_radius()));

  SparkRoot root;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  double width = 1.0;
  for (int w = 0; w < options.widening_budget; ++w, width *= 2.0) {
    root.widenings = w;
    lo = std::max(center - width, floor_xi);
    hi = std::min(center + width, kXiCeiling);
    const int s_lo = spark_sign(problem, lo);
    const int s_hi = spark_sign(problem, hi);
    if (s_lo == 0) {
      root.eps = LogLogCoord{lo};
      root.lo = root.hi = lo;
      return root;
    }
    if (s_hi == 0) {
      root.eps = LogLogCoord{hi};
      root.lo = root.hi = hi;
      return root;
    }
    if (s_lo > 0 && s_hi < 0) {
      bracketed = true;
      break;
    }
    if (lo == floor_xi && hi == kXiCeiling) break;
  }
  if (!bracketed) {
    throw NoBracket("spark: no sign change around xi = " + num(center) + " for n = " +
                    std::to_string(problem.n) + " (n too small or P outside the basin)");
  }

  for (int i = 0; i < options.bisection_budget && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    root.bisections = i + 1;
    const int s = spark_sign(problem, mid);
    if (s == 0) {
      lo = hi = mid;
      break;
    }
    (s > 0 ? lo : hi) = mid;
  }
  root.lo = lo;
  root.hi = hi;
  root.eps = LogLogCoord{0.5 * (lo + hi)};
  return root;
}

SparkSequence spark_sequence(const SparkProblem& tmpl, std::int64_t n_first, std::int64_t n_last, double tol) {
  if (n_first < 1 || n_last < n_first) throw DomainError("spark_sequence: empty or invalid n range");
  if (!tmpl.model || !tmpl.target) throw InvalidConfig("spark_sequence: incomplete problem");

  SparkSequence out;
  const RectifyingChart chart(tmpl.model, std::min(tol, 1e-12));
  out.chart_target = chart(tmpl.target(0.0));
  const double ln_lambda = std::log(tmpl.model->exponent());

  const auto count = static_cast<std::size_t>(n_last - n_first + 1);
  std::vector<std::optional<double>> roots(count);
  std::vector<std::string> no_bracket(count);
  parallel_for(count, [&](std::size_t i) {
    SparkProblem p = tmpl;
    p.n = n_first + static_cast<std::int64_t>(i);
    try {
      roots[i] = solve_spark(p, tol).eps.xi;
    } catch (const NoBracket& e) {
      no_bracket[i] = e.what();
    }
  });

  std::size_t first = 0;
  while (first < count && !roots[first]) ++first;
  if (first == count) throw NoBracket("spark_sequence: no n in range has a bracketed root");
  for (std::size_t i = first; i < count; ++i) {
    if (!roots[i]) throw NoBracket(no_bracket[i]);
    const std::int64_t n = n_first + static_cast<std::int64_t>(i);
    const double xi = *roots[i];
    out.samples.push_back({n, LogLogCoord{xi}, xi + static_cast<double>(n) * ln_lambda - out.chart_target});
  }
  out.first_bracketed_n = n_first + static_cast<std::int64_t>(first);
  return out;
}

EpsEntry SparkTable::eps_at(std::size_t index) const {
  if (index >= eps_xi.size()) throw OutOfRange("SparkTable: eps index out of range");
  const auto n = static_cast<std::size_t>(N);
  return EpsEntry{static_cast<int>(index % n) + 1, m_first + static_cast<std::int64_t>(index / n), eps_xi[index],
                  eps_residual[index]};
}

std::size_t SparkTable::eps_index(int k, std::int64_t m) const {
  if (k < 1 || k > N || m < m_first || m > m_last()) {
    throw OutOfRange("SparkTable: no entry for k = " + std::to_string(k) + ", m = " + std::to_string(m));
  }
  return static_cast<std::size_t>((m - m_first) * N + (k - 1));
}

std::int64_t SparkTable::m_last() const noexcept {
  return m_first + static_cast<std::int64_t>(eps_xi.size()) / N - 1;
}

std::int64_t interleaving_start(const SparkTable& table) {
  const auto& xs = table.eps_xi;
  std::size_t start = 0;
  for (std::size_t i = xs.size(); i-- > 1;) {
    if (!(xs[i - 1] < xs[i])) {
      start = i;
      break;
    }
  }
  const auto n = static_cast<std::size_t>(table.N);
  return table.m_first + static_cast<std::int64_t>((start + n - 1) / n);
}

namespace {

// Enough periods of the exterior circle to sit above the largest ι.
std::int64_t covering_m(double iota_max, double xi_e1, double ln_lambda_e, double slack) {
  const double periods = std::ceil((iota_max + slack - xi_e1) / ln_lambda_e);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(periods) + 1);
}

void fill_synthetic(const THConfig& config, std::int64_t depth, SparkTable& table) {
  const Perturbation pert = config.perturbation.value_or(Perturbation{0.0, 0.5});
  const double step_i = -table.ln_lambda_i;
  table.iota.reserve(static_cast<std::size_t>(depth));
  for (std::int64_t n = 1; n <= depth; ++n) {
    const double r = pert.at(static_cast<double>(n));
    table.iota.push_back({n, config.xi_I.front() + static_cast<double>(n) * step_i + r, r});
  }
  const std::int64_t m_last =
      covering_m(table.iota.back().xi, config.xi_E.front(), table.ln_lambda_e, 2.0 * std::fabs(pert.r));
  table.m_first = 1;
  const std::size_t total = static_cast<std::size_t>(m_last) * config.N();
  table.eps_xi.reserve(total);
  table.eps_residual.reserve(total);
  for (std::int64_t m = 1; m <= m_last; ++m) {
    const double r = pert.at(static_cast<double>(m));
    for (double xi_e : config.xi_E) {
      table.eps_xi.push_back(static_cast<double>(m) * table.ln_lambda_e + xi_e + r);
      table.eps_residual.push_back(r);
    }
  }
}

void fill_from_models(const THConfig& config, std::int64_t depth, double tol, SparkTable& table) {
  const ModelAttachment& models = *config.models;
  const double step_i = -table.ln_lambda_i;

  SparkProblem interior{models.interior, constant_target(models.I), 1};
  const SparkSequence iota = spark_sequence(interior, 1, depth, tol);
  for (const auto& s : iota.samples) {
    table.iota.push_back({s.n, s.eps.xi, s.eps.xi - (static_cast<double>(s.n) * step_i + config.xi_I.front())});
  }

  const std::size_t n_sides = config.N();
  const std::int64_t m_last = covering_m(table.iota.back().xi, config.xi_E.front(), table.ln_lambda_e, 1.0);
  const std::size_t total = static_cast<std::size_t>(m_last) * n_sides;
  std::vector<std::optional<double>> roots(total);
  parallel_for(total, [&](std::size_t i) {
    SparkProblem p{models.exterior, constant_target(models.E[i % n_sides]),
                   1 + static_cast<std::int64_t>(i / n_sides)};
    try {
      roots[i] = solve_spark(p, tol).eps.xi;
    } catch (const NoBracket&) {
    }
  });

  // First m from which every k has a root.
  std::size_t start = total;
  while (start > 0 && roots[start - 1]) --start;
  start = (start + n_sides - 1) / n_sides * n_sides;
  if (start >= total) throw NoBracket("th_sparks: no exterior level m has roots for every k");
  table.m_first = 1 + static_cast<std::int64_t>(start / n_sides);
  for (std::size_t i = start; i < total; ++i) {
    const auto m = static_cast<double>(1 + i / n_sides);
    const double xi = *roots[i];
    table.eps_xi.push_back(xi);
    table.eps_residual.push_back(xi - (m * table.ln_lambda_e + config.xi_E[i % n_sides]));
  }
}

}  // namespace

SparkTable th_sparks(const THConfig& input, std::int64_t depth, const ThSparkOptions& options) {
  if (depth < 1) throw DomainError("th_sparks: depth >= 1 required");
  const bool use_models = input.models.has_value() && !options.synthetic;
  const THConfig config = use_models ? resolve_model_charts(input, options.tol) : input;
  validate(config);

  SparkTable table;
  table.N = static_cast<std::int64_t>(config.N());
  table.ln_lambda_i = std::log(config.lambda_i);
  table.ln_lambda_e = std::log(config.lambda_e);
  if (use_models) {
    fill_from_models(config, depth, options.tol, table);
  } else {
    fill_synthetic(config, depth, table);
  }
  table.m0 = interleaving_start(table);
  table.interleaving_certified = table.m0 <= table.m_last();
  return table;
}

void write_csv(const SparkTable& table, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"side", "k", "n_or_m", "xi_value", "residual"});
  for (const auto& e : table.iota) {
    csv.row({"iota", "", std::to_string(e.n), format_double(e.xi), format_double(e.residual)});
  }
  for (std::size_t i = 0; i < table.eps_count(); ++i) {
    const EpsEntry e = table.eps_at(i);
    csv.row({"eps", std::to_string(e.k), std::to_string(e.m), format_double(e.xi), format_double(e.residual)});
  }
}

}  // namespace polycycle
