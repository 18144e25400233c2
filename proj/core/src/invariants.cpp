#include "polycycle/invariants.hpp"

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

std::vector<double> arc_lengths(const std::vector<double>& xs, double period) {
  std::vector<double> out(xs.size());
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) out[k] = xs[k + 1] - xs[k];
  out.back() = xs.front() + period - xs.back();
  return out;
}

}  // namespace

double phi_of(const THConfig& config) {
  validate(config);
  return std::log(config.lambda_e) / -std::log(config.lambda_i);
}

InvariantVector invariant_vector(const THConfig& config, std::int64_t q_max, double rational_tol) {
  InvariantVector out;
  out.phi = phi_of(config);
  const double scale = -std::log(config.lambda_i);
  out.Phi = arc_lengths(config.xi_E, std::log(config.lambda_e));
  for (double& p : out.Phi) p /= scale;
  out.fraction = rational_approximation(out.phi, q_max, rational_tol);
  return out;
}

InvariantVector invariant_vector_from_arcs(std::vector<double> Phi, std::int64_t q_max, double rational_tol) {
  if (Phi.empty()) throw InvalidConfig("invariant vector needs at least one arc");
  InvariantVector out;
  for (double p : Phi) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidConfig("arc lengths must be positive, got " + num(p));
    out.phi += p;
  }
  out.Phi = std::move(Phi);
  out.fraction = rational_approximation(out.phi, q_max, rational_tol);
  return out;
}

std::vector<double> normalize_projective(std::vector<double> coords) {
  bool any = false;
  for (double c : coords) any = any || c != 0.0;
  if (!any) throw DegenerateClass("projective class: all coordinates are zero");
  const double first = coords.front();
  if (first == 0.0) throw DegenerateClass("projective class: first coordinate is zero, cannot normalize to 1");
  for (double& c : coords) c /= first;
  return coords;
}

std::vector<double> projective_invariant(const THConfig& config) {
  validate(config);
  std::vector<double> coords = arc_lengths(config.xi_E, std::log(config.lambda_e));
  const std::vector<double> psi = arc_lengths(config.xi_I, -std::log(config.lambda_i));
  coords.insert(coords.end(), psi.begin(), psi.end());
  return normalize_projective(std::move(coords));
}

std::string to_string(Verdict v) {
  return v == Verdict::Inequivalent ? "Inequivalent" : "NotDistinguished";
}

std::string to_string(Obstruction o) {
  switch (o) {
    case Obstruction::None: return "none";
    case Obstruction::PhiMismatch: return "phi_mismatch";
    case Obstruction::ArcMismatch: return "arc_mismatch";
    case Obstruction::ArcMismatchRational: return "arc_mismatch_rational";
  }
  return "unknown";
}

VerdictResult equivalence_verdict(const InvariantVector& a, const InvariantVector& b, double tol, Regime regime,
                                  std::optional<std::int64_t> q_override) {
  if (a.N() != b.N()) {
    throw DimensionMismatch("verdict: invariant vectors have " + std::to_string(a.N()) + " and " +
                            std::to_string(b.N()) + " arcs");
  }
  if (!(tol >= 0.0)) throw DomainError("verdict: tol must be non-negative");

  VerdictResult out;
  const double dphi = std::fabs(a.phi - b.phi);
  if (dphi > tol) {
    out.verdict = Verdict::Inequivalent;
    out.reason = Obstruction::PhiMismatch;
    out.difference = dphi;
    out.threshold = tol;
    out.message = "phi differs: |" + num(a.phi) + " - " + num(b.phi) + "| = " + num(dphi) + " > " + num(tol);
    return out;
  }

  std::optional<std::int64_t> q;
  if (regime == Regime::Auto) {
    if (a.q() && b.q() && *a.q() == *b.q()) {
      q = a.q();
    } else if (a.q() || b.q()) {
      throw DomainError("verdict: rationality of phi is ambiguous (detected denominators differ); "
                        "pass the regime explicitly");
    }
  } else if (regime == Regime::Rational) {
    q = q_override ? q_override : (a.q() ? a.q() : b.q());
    if (!q || *q < 1) throw DomainError("verdict: rational regime needs a denominator q >= 1");
  }
  out.q = q;

  const double threshold = q ? 2.0 / static_cast<double>(*q) + tol : tol;
  for (std::size_t k = 0; k < a.N(); ++k) {
    const double d = std::fabs(a.Phi[k] - b.Phi[k]);
    if (d > threshold) {
      out.verdict = Verdict::Inequivalent;
      out.reason = q ? Obstruction::ArcMismatchRational : Obstruction::ArcMismatch;
      out.arc = k + 1;
      out.difference = d;
      out.threshold = threshold;
      out.message = "arc " + std::to_string(k + 1) + " differs by " + num(d) + " > " + num(threshold) +
                    (q ? " (phi rational, q = " + std::to_string(*q) + ")" : " (phi irrational)");
      return out;
    }
  }
  out.threshold = threshold;
  out.message = "no obstruction found";
  return out;
}

}  // namespace polycycle
