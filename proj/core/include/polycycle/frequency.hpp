#pragma once

// Which exterior arc each interior spark ι_n falls into, and the resulting
// visit frequencies ψ_k.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "polycycle/invariants.hpp"
#include "polycycle/sparkler.hpp"

namespace polycycle {

struct Assignment {
  std::int64_t n = 0;
  int k = 0;
  std::int64_t m = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// For each ι_n past the first certified level m0: the entry ε_{k,m} with the
// largest ξ strictly below ξ(ι_n), i.e. ι_n in [ε_{k+1,m}, ε_{k,m}) on the
// x-scale. Entries with ξ(ι_n) <= ξ(ε_{1,m0}) are skipped. Throws
// OutOfRange when some ι_n lies beyond the table or nothing is assignable,
// DomainError when the table has no certified interleaving.
std::vector<Assignment> assign_k(const SparkTable& table);

struct FrequencyOptions {
  // Irrational case: pass when |ψ_k - Φ_k/φ| <= tolerance.
  double tolerance = 0.01;
  // Tail window for the rational bounds: max(cut/10, min_window).
  std::int64_t min_window = 1000;
};

struct RationalBounds {
  std::int64_t q = 0;
  double liminf = 0.0;
  double limsup = 0.0;
  // -1/q + φ limsup ψ_k <= Φ_k
  bool lower_holds = false;
  // Φ_k <= 1/q + φ liminf ψ_k
  bool upper_holds = false;
};

struct FrequencyReport {
  std::int64_t depth = 0;  // the cut
  double phi = 0.0;
  std::vector<std::int64_t> counts;
  std::vector<double> psi;
  std::vector<double> predicted;  // Φ_k/φ
  std::vector<double> abs_error;
  std::vector<std::optional<RationalBounds>> bounds;
  std::vector<bool> verdict;
  std::int64_t window = 0;
  bool pass = false;

  std::size_t N() const noexcept { return psi.size(); }
};

// ψ_k over the first `cut` assignments. Throws DomainError if cut < 1,
// OutOfRange if fewer assignments exist, DimensionMismatch if some k exceeds
// the invariant vector.
FrequencyReport frequencies(const std::vector<Assignment>& assignments, std::int64_t cut,
                            const InvariantVector& invariants, const FrequencyOptions& options = {});

// Columns k,psi,predicted,abs_error.
void write_csv(const FrequencyReport& report, std::ostream& out);

}  // namespace polycycle
