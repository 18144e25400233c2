#pragma once

// Sparkling connections: roots ε_n of Δ_ε^n(ε) = P(ε) and the interleaved
// tables ι_n, ε_{k,m} they generate.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "polycycle/map_family.hpp"
#include "polycycle/scale.hpp"
#include "polycycle/th_config.hpp"

namespace polycycle {

// P(ε) on the x-scale. It receives 0 when ε is below the double range.
using TargetFunction = std::function<double(double)>;

TargetFunction constant_target(double value);

struct SparkProblem {
  MapFamilyPtr model;  // exponent < 1
  TargetFunction target;
  std::int64_t n = 1;
};

struct SparkOptions {
  int widening_budget = 60;
  int bisection_budget = 400;
};

struct SparkRoot {
  LogLogCoord eps;
  // Final sign bracket on the ξ-scale: overshoot at lo, undershoot at hi.
  double lo = 0.0;
  double hi = 0.0;
  int widenings = 0;
  int bisections = 0;
};

// +1 when Δ_ε^n(ε) > P(ε) (or the orbit leaves (0, δ)), -1 when below, 0 on
// an exact hit; ε = exp(-exp(xi)).
int spark_sign(const SparkProblem& problem, double xi);

// Number of sign changes of spark_sign over `samples` equispaced points.
int count_sign_changes(const SparkProblem& problem, double lo, double hi, int samples = 32);

// Bisection on the ξ-scale. Throws NoBracket, DomainError.
SparkRoot solve_spark(const SparkProblem& problem, double tol, const SparkOptions& options = {});

struct SparkSample {
  std::int64_t n = 0;
  LogLogCoord eps;
  // ln(-ln ε_n) + n ln Λ - ξ(P(0)).
  double residual = 0.0;
};

struct SparkSequence {
  std::vector<SparkSample> samples;
  double chart_target = 0.0;          // ξ(P(0)) in the chart of Δ_0
  std::int64_t first_bracketed_n = 0; // smallest n in range with a root
};

SparkSequence spark_sequence(const SparkProblem& problem_template, std::int64_t n_first,
                             std::int64_t n_last, double tol);

struct IotaEntry {
  std::int64_t n = 0;
  double xi = 0.0;
  double residual = 0.0;
};

struct EpsEntry {
  int k = 0;
  std::int64_t m = 0;
  double xi = 0.0;
  double residual = 0.0;
};

// ι_n and ε_{k,m} on the ξ-scale. ε entries are stored in traversal order
// ε_{1,m}, ..., ε_{N,m}, ε_{1,m+1}, ... starting from m = m_first.
struct SparkTable {
  std::int64_t N = 1;
  double ln_lambda_i = 0.0;
  double ln_lambda_e = 0.0;
  std::vector<IotaEntry> iota;
  std::int64_t m_first = 1;
  std::vector<double> eps_xi;
  std::vector<double> eps_residual;
  // Traversal order is strictly increasing in ξ from ε_{1,m0} on.
  std::int64_t m0 = 1;
  bool interleaving_certified = false;

  std::size_t eps_count() const noexcept { return eps_xi.size(); }
  EpsEntry eps_at(std::size_t index) const;
  std::size_t eps_index(int k, std::int64_t m) const;
  std::int64_t m_last() const noexcept;
};

// First m from which the traversal order is strictly increasing to the end of
// the table; returns m_last() + 1 when even the last pair is out of order.
std::int64_t interleaving_start(const SparkTable& table);

struct ThSparkOptions {
  double tol = 1e-12;
  // Force synthetic mode even when models are attached.
  bool synthetic = false;
};

// ι_n for n = 1..depth and ε_{k,m} for every m needed to cover them.
SparkTable th_sparks(const THConfig& config, std::int64_t depth, const ThSparkOptions& options = {});

// CSV with columns side,k,n_or_m,xi_value,residual.
void write_csv(const SparkTable& table, std::ostream& out);

}  // namespace polycycle
