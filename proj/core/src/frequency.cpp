#include "polycycle/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "polycycle/csv.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/parallel.hpp"

namespace polycycle {

std::vector<Assignment> assign_k(const SparkTable& table) {
  if (table.eps_xi.empty() || table.iota.empty()) throw OutOfRange("assign_k: empty spark table");
  if (!table.interleaving_certified || table.m0 > table.m_last()) {
    throw DomainError("assign_k: the exterior sparks are not in interleaving order at any stored level");
  }
  const auto N = static_cast<std::size_t>(table.N);
  const auto s0 = static_cast<std::size_t>(table.m0 - table.m_first) * N;
  const double threshold = table.eps_xi[s0];
  const double top = table.eps_xi.back();
  const auto first = table.eps_xi.begin() + static_cast<std::ptrdiff_t>(s0);

  // Index of the covering entry per ι, or npos when skipped.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> hit(table.iota.size(), npos);
  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t total = table.iota.size();
  parallel_for((total + kChunk - 1) / kChunk, [&](std::size_t chunk) {
    const std::size_t end = std::min(total, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const double xi = table.iota[i].xi;
      if (xi <= threshold) continue;
      if (!(xi <= top)) {
        throw OutOfRange("assign_k: iota_" + std::to_string(table.iota[i].n) +
                         " lies below every stored eps entry; extend the table");
      }
      const auto it = std::lower_bound(first, table.eps_xi.end(), xi);
      hit[i] = static_cast<std::size_t>(it - table.eps_xi.begin()) - 1;
    }
  });

  std::vector<Assignment> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (hit[i] == npos) continue;
    out.push_back({table.iota[i].n, static_cast<int>(hit[i] % N) + 1,
                   table.m_first + static_cast<std::int64_t>(hit[i] / N)});
  }
  if (out.empty()) throw OutOfRange("assign_k: no iota entry lies past the certified level m0");
  return out;
}

FrequencyReport frequencies(const std::vector<Assignment>& assignments, std::int64_t cut,
                            const InvariantVector& inv, const FrequencyOptions& options) {
  if (cut < 1) throw DomainError("frequencies: cut >= 1 required");
  if (cut > static_cast<std::int64_t>(assignments.size())) {
    throw OutOfRange("frequencies: cut " + std::to_string(cut) + " exceeds the " +
                     std::to_string(assignments.size()) + " available assignments");
  }
  const std::size_t N = inv.N();
  const auto ucut = static_cast<std::size_t>(cut);

  FrequencyReport r;
  r.depth = cut;
  r.phi = inv.phi;
  r.counts.assign(N, 0);
  for (std::size_t i = 0; i < ucut; ++i) {
    const int k = assignments[i].k;
    if (k < 1 || static_cast<std::size_t>(k) > N) {
      throw DimensionMismatch("frequencies: assignment k = " + std::to_string(k) + " but the invariant has " +
                              std::to_string(N) + " arcs");
    }
    ++r.counts[static_cast<std::size_t>(k - 1)];
  }

  const double dcut = static_cast<double>(cut);
  for (std::size_t k = 0; k < N; ++k) {
    r.psi.push_back(static_cast<double>(r.counts[k]) / dcut);
    r.predicted.push_back(inv.Phi[k] / inv.phi);
    r.abs_error.push_back(std::fabs(r.psi[k] - r.predicted[k]));
  }
  r.bounds.assign(N, std::nullopt);
  r.window = std::min(cut, std::max(cut / 10, options.min_window));

  if (const auto q = inv.q()) {
    // Running ψ_k over the tail window.
    std::vector<std::int64_t> running(N, 0);
    const std::size_t tail_start = ucut - static_cast<std::size_t>(r.window);
    std::vector<double> lo(N, 1.0), hi(N, 0.0);
    for (std::size_t i = 0; i < ucut; ++i) {
      ++running[static_cast<std::size_t>(assignments[i].k - 1)];
      if (i < tail_start) continue;
      const double n = static_cast<double>(i + 1);
      for (std::size_t k = 0; k < N; ++k) {
        const double p = static_cast<double>(running[k]) / n;
        lo[k] = std::min(lo[k], p);
        hi[k] = std::max(hi[k], p);
      }
    }
    const double inv_q = 1.0 / static_cast<double>(*q);
    for (std::size_t k = 0; k < N; ++k) {
      RationalBounds b;
      b.q = *q;
      b.liminf = lo[k];
      b.limsup = hi[k];
      b.lower_holds = -inv_q + inv.phi * hi[k] <= inv.Phi[k];
      b.upper_holds = inv.Phi[k] <= inv_q + inv.phi * lo[k];
      r.bounds[k] = b;
    }
  }

  r.pass = true;
  for (std::size_t k = 0; k < N; ++k) {
    const bool ok = r.bounds[k] ? (r.bounds[k]->lower_holds && r.bounds[k]->upper_holds)
                                : r.abs_error[k] <= options.tolerance;
    r.verdict.push_back(ok);
    r.pass = r.pass && ok;
  }
  return r;
}

void write_csv(const FrequencyReport& report, std::ostream& out) {
  CsvWriter csv(out);
  csv.row({"k", "psi", "predicted", "abs_error"});
  for (std::size_t k = 0; k < report.N(); ++k) {
    csv.row({std::to_string(k + 1), format_double(report.psi[k]), format_double(report.predicted[k]),
             format_double(report.abs_error[k])});
  }
}

}  // namespace polycycle
