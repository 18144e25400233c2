#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "polycycle/checks.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/frequency.hpp"
#include "polycycle/rotation.hpp"

namespace polycycle {
namespace {

THConfig n2() {
  THConfig c;
  c.lambda_i = 0.5;
  c.lambda_e = 1.25;
  c.xi_E = {0.0, 0.1};
  c.xi_I = {0.3};
  return c;
}

SparkTable hand_table() {
  SparkTable t;
  t.N = 2;
  t.m_first = 1;
  t.m0 = 1;
  t.interleaving_certified = true;
  t.eps_xi = {1, 2, 3, 4, 5, 6};
  t.eps_residual.assign(6, 0.0);
  return t;
}

TEST(AssignK, AgreesWithScanAndCircle) {
  const THConfig c = n2();
  const SparkTable t = th_sparks(c, 10000);
  const std::vector<Assignment> a = assign_k(t);
  EXPECT_EQ(a.size(), 10000u);
  EXPECT_EQ(a, testing::assign_by_scan(t));
  EXPECT_EQ(a, testing::assign_by_circle(c, t));
  EXPECT_EQ(a, assign_k_linear(t));
}

TEST(AssignK, BoundaryBelongsToTheArcBelow) {
  SparkTable t = hand_table();
  t.iota = {{1, 0.5, 0}, {2, 1.0, 0}, {3, 3.0, 0}, {4, 3.5, 0}, {5, 6.0, 0}};
  const std::vector<Assignment> a = assign_k(t);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0], (Assignment{3, 2, 1}));  // ξ = 3 is ε_{1,2} itself: (ε_{1,2}, ε_{2,1}]
  EXPECT_EQ(a[1], (Assignment{4, 1, 2}));
  EXPECT_EQ(a[2], (Assignment{5, 1, 3}));
}

TEST(AssignK, Errors) {
  SparkTable t = hand_table();
  t.iota = {{1, 6.5, 0}};
  EXPECT_THROW(assign_k(t), OutOfRange);
  t.iota = {{1, 0.5, 0}};
  EXPECT_THROW(assign_k(t), OutOfRange);
  t.iota = {{1, 2.5, 0}};
  t.interleaving_certified = false;
  EXPECT_THROW(assign_k(t), DomainError);
  t = hand_table();
  EXPECT_THROW(assign_k(t), OutOfRange);
}

TEST(AssignK, SingleArc) {
  THConfig c = n2();
  c.xi_E = {0.05};
  for (const auto& a : assign_k(th_sparks(c, 2000))) EXPECT_EQ(a.k, 1);
}

TEST(AssignK, LaterM0SkipsEarlyIota) {
  THConfig c = n2();
  c.perturbation = Perturbation{5.0, 0.5};
  c.xi_I = {-3.0};
  const SparkTable t = th_sparks(c, 500);
  ASSERT_GT(t.m0, 1);
  const std::vector<Assignment> a = assign_k(t);
  EXPECT_LT(a.size(), 500u);
  EXPECT_EQ(a, testing::assign_by_scan(t));
  for (const auto& x : a) EXPECT_GE(x.m, t.m0);
}

TEST(Frequencies, IrrationalConverges) {
  const THConfig c = n2();
  const SparkTable t = th_sparks(c, 100000);
  const std::vector<Assignment> a = assign_k(t);
  const InvariantVector inv = invariant_vector(c);
  const FrequencyReport r = frequencies(a, 100000, inv);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.psi[0], 0.448142, 0.01);
  EXPECT_NEAR(r.psi[1], 0.551858, 0.01);
  EXPECT_EQ(r.counts[0] + r.counts[1], 100000);
  EXPECT_TRUE(check_frequencies(t, a, r).pass());
}

TEST(Frequencies, RationalBounds) {
  THConfig c = n2();
  c.lambda_e = std::sqrt(2.0);
  const SparkTable t = th_sparks(c, 20000);
  const InvariantVector inv = invariant_vector(c);
  ASSERT_TRUE(inv.q().has_value());
  const FrequencyReport r = frequencies(assign_k(t), 20000, inv);
  for (const auto& b : r.bounds) {
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->q, 2);
    EXPECT_TRUE(b->lower_holds);
    EXPECT_TRUE(b->upper_holds);
  }
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.window, 2000);
}

TEST(Frequencies, MatchesRotationCounts) {
  const THConfig c = n2();
  const std::int64_t n = 10000;
  const FrequencyReport r = frequencies(assign_k(th_sparks(c, n)), n, invariant_vector(c));
  const double L = std::log(c.lambda_e);
  RotationProblem p;
  p.rho = std::log(2.0) / L;
  p.c = (c.xi_I[0] - c.xi_E[0]) / L;
  for (std::size_t k = 0; k < c.N(); ++k) {
    const double a = (c.xi_E[k] - c.xi_E[0]) / L;
    const double b = k + 1 < c.N() ? (c.xi_E[k + 1] - c.xi_E[0]) / L : 1.0;
    p.limit = Arc::from_endpoints(a, b, EndpointKind::LeftOpen);
    EXPECT_EQ(orbit_frequency(p, n).count(n), r.counts[k]) << "k=" << k + 1;
  }
}

TEST(Frequencies, Errors) {
  const InvariantVector inv = invariant_vector(n2());
  const std::vector<Assignment> a{{1, 1, 1}, {2, 3, 1}};
  EXPECT_THROW(frequencies(a, 0, inv), DomainError);
  EXPECT_THROW(frequencies(a, 3, inv), OutOfRange);
  EXPECT_THROW(frequencies(a, 2, inv), DimensionMismatch);
  EXPECT_NO_THROW(frequencies(a, 1, inv));
}

TEST(Frequencies, CsvLayout) {
  const InvariantVector inv = invariant_vector(n2());
  const FrequencyReport r = frequencies({{1, 1, 1}, {2, 2, 1}}, 2, inv);
  std::ostringstream os;
  write_csv(r, os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "k,psi,predicted,abs_error");
  EXPECT_NE(os.str().find("\n1,0.5,"), std::string::npos);
}

}  // namespace
}  // namespace polycycle
