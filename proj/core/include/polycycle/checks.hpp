#pragma once

// Invariant suites behind the CLI's --check mode. Each returns one result per
// property instead of throwing, so a run reports everything that failed.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "polycycle/certify.hpp"
#include "polycycle/frequency.hpp"
#include "polycycle/invariants.hpp"
#include "polycycle/map_family.hpp"
#include "polycycle/rotation.hpp"
#include "polycycle/sparkler.hpp"

namespace polycycle {

enum class PropertyStatus { Pass, Fail, Skipped };

std::string to_string(PropertyStatus s);

struct PropertyResult {
  std::string property;
  PropertyStatus status = PropertyStatus::Pass;
  std::string detail;
};

struct CheckReport {
  std::string subject;
  std::vector<PropertyResult> results;

  void add(std::string property, bool ok, std::string detail = {});
  void skip(std::string property, std::string detail);
  // No result failed.
  bool pass() const;
  std::vector<std::string> failed_properties() const;
};

// Columns subject,property,status,detail.
void write_csv(const CheckReport& report, std::ostream& out, bool header = true);

CheckReport check_rectifier(const MapFamilyPtr& model, std::span<const double> xs, double tol);

struct SparkCheckOptions {
  double slope_tol = 1e-4;
  // Λ' for the perturbation bound; 0 = (Λ + 1)/2.
  double lambda_prime = 0.0;
  int sign_samples = 32;
};

CheckReport check_sparkler(const SparkProblem& tmpl, const SparkSequence& sequence,
                           const SparkCheckOptions& options = {});

CheckReport check_table(const SparkTable& table);

CheckReport check_invariants(const THConfig& config);

CheckReport check_frequencies(const SparkTable& table, const std::vector<Assignment>& assignments,
                              const FrequencyReport& report);

// Linear-scan reference for assign_k.
std::vector<Assignment> assign_k_linear(const SparkTable& table);

CheckReport check_rotation(const RotationProblem& problem, std::int64_t n, double exact_tol = 0.01,
                           double sandwich_margin = 1e-3);

CheckReport check_certificate(const EstimateCertificate& certificate);

}  // namespace polycycle
