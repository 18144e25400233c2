#include "polycycle/checks.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "polycycle/csv.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/rectifier.hpp"

namespace polycycle {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(PropertyStatus s) {
  switch (s) {
    case PropertyStatus::Pass: return "pass";
    case PropertyStatus::Fail: return "fail";
    case PropertyStatus::Skipped: return "skipped";
  }
  return "unknown";
}

void CheckReport::add(std::string property, bool ok, std::string detail) {
  results.push_back({std::move(property), ok ? PropertyStatus::Pass : PropertyStatus::Fail, std::move(detail)});
}

void CheckReport::skip(std::string property, std::string detail) {
  results.push_back({std::move(property), PropertyStatus::Skipped, std::move(detail)});
}

bool CheckReport::pass() const {
  return std::none_of(results.begin(), results.end(),
                      [](const PropertyResult& r) { return r.status == PropertyStatus::Fail; });
}

std::vector<std::string> CheckReport::failed_properties() const {
  std::vector<std::string> out;
  for (const auto& r : results) {
    if (r.status == PropertyStatus::Fail) out.push_back(r.property);
  }
  return out;
}

void write_csv(const CheckReport& report, std::ostream& out, bool header) {
  CsvWriter csv(out);
  if (header) csv.row({"subject", "property", "status", "detail"});
  for (const auto& r : report.results) csv.row({report.subject, r.property, to_string(r.status), r.detail});
}

CheckReport check_rectifier(const MapFamilyPtr& model, std::span<const double> xs, double tol) {
  CheckReport report;
  report.subject = "rectifier: " + model->describe();
  const RectifyingChart chart(model, tol);

  double worst = 0.0;
  int tested = 0;
  int outside = 0;
  for (double x : xs) {
    try {
      worst = std::max(worst, chart_residual(chart, x));
      ++tested;
    } catch (const DomainError&) {
      ++outside;
    }
  }
  if (tested == 0) {
    report.skip("conjugacy xi(Delta(x)) = xi(x) + ln Lambda", "no sample with x and Delta(x) in the chart domain");
  } else {
    report.add("conjugacy xi(Delta(x)) = xi(x) + ln Lambda", worst < 10.0 * tol,
               "max residual " + num(worst) + " over " + std::to_string(tested) + " points (" +
                   std::to_string(outside) + " outside the domain), bound " + num(10.0 * tol));
  }

  // |ξ - ln(-ln x)|·(-ln x) should stay bounded as x -> 0.
  std::vector<std::pair<double, double>> rate;
  for (double x : xs) {
    if (!(x > 0.0 && x < chart.domain_radius())) continue;
    const double u = -std::log(x);
    rate.emplace_back(u, std::fabs(chart(x) - std::log(u)) * u);
  }
  std::sort(rate.begin(), rate.end());
  if (rate.size() < 4) {
    report.skip("normalization xi(x) = ln(-ln x) + O(1/(-ln x))", "fewer than 4 samples in the domain");
  } else {
    const std::size_t half = rate.size() / 2;
    double shallow = 0.0, deep = 0.0;
    for (std::size_t i = 0; i < half; ++i) shallow = std::max(shallow, rate[i].second);
    for (std::size_t i = half; i < rate.size(); ++i) deep = std::max(deep, rate[i].second);
    report.add("normalization xi(x) = ln(-ln x) + O(1/(-ln x))", deep <= 2.0 * shallow + 1e-9,
               "max scaled deviation " + num(shallow) + " (shallow half) vs " + num(deep) + " (deep half)");
  }

  if (const auto* power = dynamic_cast<const PowerLawModel*>(model.get());
      power != nullptr && power->params().a == 0.0 && !power->depends_on_eps()) {
    const auto& p = power->params();
    const double shift = std::log(p.C) / (p.lambda - 1.0);
    double err = 0.0;
    for (const auto& [u, _] : rate) err = std::max(err, std::fabs(chart.at_u(NegLog{u}).xi - std::log(u - shift)));
    report.add("closed-form chart ln(-ln x - ln C/(Lambda - 1))", err <= 10.0 * tol, "max deviation " + num(err));
  }
  return report;
}

CheckReport check_sparkler(const SparkProblem& tmpl, const SparkSequence& seq, const SparkCheckOptions& options) {
  CheckReport report;
  report.subject = "sparkler: " + tmpl.model->describe();
  const MapFamily& model = *tmpl.model;
  const double lambda = model.exponent();

  int multiple = 0;
  for (const auto& s : seq.samples) {
    SparkProblem p = tmpl;
    p.n = s.n;
    if (count_sign_changes(p, s.eps.xi - 1.0, s.eps.xi + 1.0, options.sign_samples) != 1) ++multiple;
  }
  report.add("unique root of Delta_eps^n(eps) = P(eps)", multiple == 0,
             std::to_string(multiple) + " of " + std::to_string(seq.samples.size()) +
                 " brackets without exactly one sign change");

  bool increasing = true;
  for (std::size_t i = 1; i < seq.samples.size(); ++i) {
    increasing = increasing && seq.samples[i].eps.xi > seq.samples[i - 1].eps.xi;
  }
  report.add("eps_n strictly decreasing in n", increasing);

  const std::size_t half = seq.samples.size() / 2;
  if (seq.samples.size() - half < 3) {
    report.skip("asymptotic slope -ln Lambda", "fewer than 3 points in the last half of the range");
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(seq.samples.size() - half);
    for (std::size_t i = half; i < seq.samples.size(); ++i) {
      const auto x = static_cast<double>(seq.samples[i].n);
      const double y = seq.samples[i].eps.xi;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double err = std::fabs(slope + std::log(lambda));
    report.add("asymptotic slope -ln Lambda", err <= options.slope_tol,
               "least-squares slope " + num(slope) + ", deviation " + num(err));
  }

  if (!model.depends_on_eps()) {
    report.skip("perturbation bound 0 < Delta_eps^n - Delta_0^n < eps^(1 - Lambda')",
                "map does not depend on eps");
  } else {
    const double lp = options.lambda_prime > 0.0 ? options.lambda_prime : 0.5 * (lambda + 1.0);
    int checked = 0, failed = 0;
    for (const auto& s : seq.samples) {
      const auto eps = x_from_xi(s.eps);
      if (!eps || *eps < 1e-12) continue;
      const double eps_u = std::exp(s.eps.xi);
      const OrbitU with = iterate_map_u(model, eps_u, eps_u, s.n);
      const OrbitU without = iterate_map_u(model, kZeroEpsU, eps_u, s.n);
      if (with.escaped() || without.escaped()) continue;
      const double diff = std::exp(-with.u) - std::exp(-without.u);
      ++checked;
      if (!(diff > 0.0 && diff < std::pow(*eps, 1.0 - lp))) ++failed;
    }
    if (checked == 0) {
      report.skip("perturbation bound 0 < Delta_eps^n - Delta_0^n < eps^(1 - Lambda')",
                  "no eps_n resolvable in double precision");
    } else {
      report.add("perturbation bound 0 < Delta_eps^n - Delta_0^n < eps^(1 - Lambda')", failed == 0,
                 std::to_string(failed) + " of " + std::to_string(checked) + " roots violate it");
    }
  }
  return report;
}

CheckReport check_table(const SparkTable& table) {
  CheckReport report;
  report.subject = "spark table";
  const std::string interleaving = "interleaving eps_{1,m} > ... > eps_{N,m} > eps_{1,m+1} from m0";
  if (!table.interleaving_certified) {
    report.add(interleaving, false, "no stored level is in order");
  } else {
    const auto s0 = static_cast<std::size_t>((table.m0 - table.m_first) * table.N);
    bool ok = true;
    for (std::size_t i = s0 + 1; i < table.eps_xi.size(); ++i) ok = ok && table.eps_xi[i] > table.eps_xi[i - 1];
    report.add(interleaving, ok, "m0 = " + std::to_string(table.m0));
  }

  bool iota_ok = true;
  for (std::size_t i = 1; i < table.iota.size(); ++i) iota_ok = iota_ok && table.iota[i].xi > table.iota[i - 1].xi;
  report.add("iota_n strictly decreasing in n", iota_ok);

  bool eps_ok = true;
  const auto N = static_cast<std::size_t>(table.N);
  for (std::size_t i = N; i < table.eps_xi.size(); ++i) eps_ok = eps_ok && table.eps_xi[i] > table.eps_xi[i - N];
  report.add("eps_{k,m} strictly decreasing in m", eps_ok);
  return report;
}

CheckReport check_invariants(const THConfig& config) {
  CheckReport report;
  report.subject = "invariants";
  const InvariantVector inv = invariant_vector(config);
  double sum = 0.0;
  bool positive = true;
  for (double p : inv.Phi) {
    sum += p;
    positive = positive && p > 0.0;
  }
  report.add("sum of Phi_k equals phi", std::fabs(sum - inv.phi) <= 1e-12,
             "sum " + num(sum) + " vs phi " + num(inv.phi));
  report.add("every Phi_k positive", positive);

  THConfig shifted = config;
  for (double& x : shifted.xi_E) x += 0.05;
  const InvariantVector translated = invariant_vector(shifted);
  double dt = 0.0;
  for (std::size_t k = 0; k < inv.N(); ++k) dt = std::max(dt, std::fabs(translated.Phi[k] - inv.Phi[k]));
  report.add("Phi independent of a common shift of xi_E", dt <= 1e-12, "max change " + num(dt));

  // E_1 -> Δ_e(E_1): the first point moves one period up and becomes the last.
  THConfig moved = config;
  std::rotate(moved.xi_E.begin(), moved.xi_E.begin() + 1, moved.xi_E.end());
  moved.xi_E.back() += std::log(config.lambda_e);
  const InvariantVector rotated = invariant_vector(moved);
  double dr = 0.0;
  for (std::size_t k = 0; k < inv.N(); ++k) {
    dr = std::max(dr, std::fabs(rotated.Phi[k] - inv.Phi[(k + 1) % inv.N()]));
  }
  report.add("arc lengths unchanged by replacing E_1 with Delta_e(E_1)", dr <= 1e-12, "max change " + num(dr));
  return report;
}

std::vector<Assignment> assign_k_linear(const SparkTable& table) {
  if (!table.interleaving_certified) throw DomainError("assign_k_linear: table not certified");
  const auto N = static_cast<std::size_t>(table.N);
  const auto s0 = static_cast<std::size_t>(table.m0 - table.m_first) * N;
  std::vector<Assignment> out;
  for (const auto& iota : table.iota) {
    if (iota.xi <= table.eps_xi[s0]) continue;
    std::optional<std::size_t> best;
    for (std::size_t i = s0; i < table.eps_xi.size(); ++i) {
      if (table.eps_xi[i] < iota.xi && (!best || table.eps_xi[i] > table.eps_xi[*best])) best = i;
    }
    if (!best || iota.xi > table.eps_xi.back()) throw OutOfRange("assign_k_linear: iota beyond the table");
    out.push_back({iota.n, static_cast<int>(*best % N) + 1, table.m_first + static_cast<std::int64_t>(*best / N)});
  }
  return out;
}

CheckReport check_frequencies(const SparkTable& table, const std::vector<Assignment>& assignments,
                              const FrequencyReport& report_in) {
  CheckReport report;
  report.subject = "frequencies";
  std::int64_t total = 0;
  for (auto c : report_in.counts) total += c;
  report.add("sum of psi_k equals 1", total == report_in.depth,
             std::to_string(total) + " assigned of " + std::to_string(report_in.depth));

  constexpr std::size_t kBruteLimit = 10'000;
  if (table.iota.size() > kBruteLimit) {
    report.skip("binary-search assignment equals linear scan", "table has more than 10^4 iota entries");
  } else {
    const auto reference = assign_k_linear(table);
    report.add("binary-search assignment equals linear scan", reference == assignments);
  }

  std::string detail;
  for (std::size_t k = 0; k < report_in.N(); ++k) {
    if (!detail.empty()) detail += "; ";
    detail += "k=" + std::to_string(k + 1) + " psi " + num(report_in.psi[k]) + " predicted " +
              num(report_in.predicted[k]);
    if (report_in.bounds[k]) {
      detail += report_in.bounds[k]->lower_holds && report_in.bounds[k]->upper_holds ? " (bounds hold)"
                                                                                   : " (bounds violated)";
    }
  }
  report.add(report_in.bounds.empty() || !report_in.bounds.front() ? "frequency limit psi_k -> Phi_k/phi"
                                                                   : "rational-case frequency bounds",
             report_in.pass, detail);
  return report;
}

CheckReport check_rotation(const RotationProblem& problem, std::int64_t n, double exact_tol,
                           double sandwich_margin) {
  CheckReport report;
  report.subject = "rotation";
  const FrequencyTrace trace = orbit_frequency(problem, n);

  bool counts_ok = trace.hits.front() >= 0 && trace.hits.front() <= 1;
  for (std::size_t i = 1; i < trace.hits.size(); ++i) {
    const auto step = trace.hits[i] - trace.hits[i - 1];
    counts_ok = counts_ok && (step == 0 || step == 1);
  }
  report.add("psi_n in [0, 1] with integer counts", counts_ok);

  const FrequencyTrace again = orbit_frequency(problem, n);
  report.add("counts reproducible", again.hits == trace.hits);

  RotationProblem inner = problem, outer = problem;
  inner.arc_at = [&problem, sandwich_margin](std::int64_t j) { return problem.arc(j).shrunk(sandwich_margin); };
  outer.arc_at = [&problem, sandwich_margin](std::int64_t j) { return problem.arc(j).enlarged(sandwich_margin); };
  const FrequencyTrace lo = orbit_frequency(inner, n);
  const FrequencyTrace hi = orbit_frequency(outer, n);
  bool sandwich = true;
  for (std::size_t i = 0; i < trace.hits.size(); ++i) {
    sandwich = sandwich && lo.hits[i] <= trace.hits[i] && trace.hits[i] <= hi.hits[i];
  }
  report.add("shrinking J never adds visits, enlarging never removes them", sandwich);

  const Prediction pred = predicted_limit(problem.rho, problem.limit);
  if (pred.kind == Prediction::Kind::Exact) {
    report.add("psi_n -> |J| (irrational rotation)", pred.satisfied_by(trace.liminf_est, trace.limsup_est, exact_tol),
               "tail psi in [" + num(trace.liminf_est) + ", " + num(trace.limsup_est) + "], |J| = " +
                   num(pred.length));
  } else {
    report.add("-1/q + limsup psi <= |J| <= 1/q + liminf psi", pred.satisfied_by(trace.liminf_est, trace.limsup_est),
               "q = " + std::to_string(pred.q) + ", tail psi in [" + num(trace.liminf_est) + ", " +
                   num(trace.limsup_est) + "], |J| = " + num(pred.length));
    const RationalCount rc = rational_orbit_count(problem.c, pred.p, pred.q, problem.limit);
    report.add("periodic orbit count within [ceil(q|J|) - 1, floor(q|J|) + 1]", rc.within_bounds,
               "count " + std::to_string(rc.count) + " in [" + std::to_string(rc.lower) + ", " +
                   std::to_string(rc.upper) + "]");
  }
  return report;
}

CheckReport check_certificate(const EstimateCertificate& cert) {
  CheckReport report;
  report.subject = "certificate: " + cert.model;
  for (const auto& tally : cert.checks) {
    const std::string detail = std::to_string(tally.failed) + " of " + std::to_string(tally.checked) + " failed" +
                               (tally.note.empty() ? "" : "; " + tally.note);
    switch (tally.status) {
      case CheckStatus::Pass: report.add(tally.property, true, detail); break;
      case CheckStatus::Fail: report.add(tally.property, false, detail); break;
      case CheckStatus::Exempt: report.skip(tally.property, "exempt: " + tally.note); break;
      case CheckStatus::NotApplicable: report.skip(tally.property, "not applicable: " + tally.note); break;
    }
  }
  return report;
}

}  // namespace polycycle
