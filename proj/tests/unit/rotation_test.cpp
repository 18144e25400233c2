#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "polycycle/checks.hpp"
#include "polycycle/continued_fraction.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/rotation.hpp"

namespace polycycle {
namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

TEST(Arc, ContainsByKind) {
  const Arc closed = Arc::from_endpoints(0.2, 0.4, EndpointKind::Closed);
  EXPECT_TRUE(closed.contains(0.2));
  EXPECT_TRUE(closed.contains(1.3));
  EXPECT_FALSE(closed.contains(0.5));
  EXPECT_FALSE(Arc::from_endpoints(0.0, 0.5, EndpointKind::Open).contains(0.0));
  EXPECT_TRUE(Arc::from_endpoints(0.0, 0.5, EndpointKind::LeftOpen).contains(0.5));
  EXPECT_FALSE(Arc::from_endpoints(0.0, 0.5, EndpointKind::LeftOpen).contains(0.0));
  EXPECT_TRUE(Arc::from_endpoints(0.0, 0.5, EndpointKind::RightOpen).contains(0.0));
  EXPECT_FALSE(Arc::from_endpoints(0.0, 0.5, EndpointKind::RightOpen).contains(0.5));
}

TEST(Arc, WrapsAround) {
  const Arc a = Arc::from_endpoints(0.9, 1.1);
  EXPECT_NEAR(a.measure(), 0.2, 1e-15);
  EXPECT_TRUE(a.contains(0.95));
  EXPECT_TRUE(a.contains(0.05));
  EXPECT_FALSE(a.contains(0.5));
  EXPECT_NEAR(a.end(), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(Arc::from_endpoints(0.3, 1.7).measure(), 1.0);
  EXPECT_TRUE(Arc::full_circle().contains(0.123));
  EXPECT_NEAR(a.shrunk(0.05).measure(), 0.1, 1e-15);
  EXPECT_NEAR(a.enlarged(0.05).measure(), 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(a.shrunk(0.2).measure(), 0.0);
  EXPECT_THROW(Arc::from_endpoints(0.0, INFINITY), DomainError);
}

TEST(OrbitFrequency, GoldenQuarter) {
  RotationProblem p;
  p.rho = kGolden;
  p.limit = Arc::from_endpoints(0.0, 0.25, EndpointKind::RightOpen);
  const FrequencyTrace t = orbit_frequency(p, 100000);
  EXPECT_GE(t.psi(100000), 0.2485);
  EXPECT_LE(t.psi(100000), 0.2515);
  EXPECT_EQ(t.window, 10000);
  EXPECT_TRUE(predicted_limit(p.rho, p.limit).satisfied_by(t.liminf_est, t.limsup_est, 0.003));
}

TEST(OrbitFrequency, FullCircleAndHalf) {
  RotationProblem p;
  p.rho = kGolden;
  p.limit = Arc::full_circle();
  EXPECT_DOUBLE_EQ(orbit_frequency(p, 1000).psi(1000), 1.0);
  p.rho = 0.5;
  p.c = 0.1;
  p.limit = Arc::from_endpoints(0.0, 0.5, EndpointKind::RightOpen);
  const FrequencyTrace t = orbit_frequency(p, 1000);
  EXPECT_DOUBLE_EQ(t.psi(1000), 0.5);
  EXPECT_EQ(t.count(1), 0);  // 0.6
  EXPECT_EQ(t.count(2), 1);  // 0.1
  EXPECT_THROW(t.count(0), OutOfRange);
  EXPECT_THROW(orbit_frequency(p, 0), DomainError);
}

TEST(OrbitFrequency, MatchesSerialCount) {
  RotationProblem p;
  p.rho = std::sqrt(2.0) - 1.0;
  p.c = 0.37;
  p.drift = [](std::int64_t j) { return 0.2 * std::pow(0.9, static_cast<double>(j)); };
  p.limit = Arc::from_endpoints(0.6, 1.05, EndpointKind::LeftOpen);
  const std::int64_t n = 200000;
  const FrequencyTrace t = orbit_frequency(p, n);
  std::int64_t count = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    if (p.limit.contains(p.point(j))) ++count;
    if (j % 50000 == 0) EXPECT_EQ(t.count(j), count);
  }
}

TEST(OrbitFrequency, DriftDoesNotMoveTheLimit) {
  RotationProblem clean;
  clean.rho = kGolden;
  clean.limit = Arc::from_endpoints(0.1, 0.45);
  RotationProblem drifted = clean;
  drifted.drift = [](std::int64_t j) { return 0.3 * std::pow(0.99, static_cast<double>(j)); };
  drifted.arc_at = [&](std::int64_t j) { return clean.limit.enlarged(0.1 / static_cast<double>(j)); };
  const std::int64_t n = 100000;
  EXPECT_NEAR(orbit_frequency(drifted, n).psi(n), orbit_frequency(clean, n).psi(n), 0.003);
  EXPECT_TRUE(check_rotation(drifted, n).pass());
}

TEST(PredictedLimit, Kinds) {
  const Arc a = Arc::from_endpoints(0.0, 0.3);
  const Prediction g = predicted_limit(kGolden, a);
  EXPECT_EQ(g.kind, Prediction::Kind::Exact);
  EXPECT_NEAR(g.length, 0.3, 1e-15);
  const Prediction h = predicted_limit(0.5, a);
  EXPECT_EQ(h.kind, Prediction::Kind::Bounds);
  EXPECT_EQ(h.p, 1);
  EXPECT_EQ(h.q, 2);
  const Prediction t = predicted_limit(2.0 / 3.0, a);
  EXPECT_EQ(t.q, 3);
  // -1/3 + 0.6 <= 0.3 <= 1/3 + 0.0
  EXPECT_TRUE(t.satisfied_by(0.0, 0.6));
  EXPECT_FALSE(t.satisfied_by(0.0, 0.7));
}

TEST(RationalOrbitCount, Examples) {
  EXPECT_EQ(rational_orbit_count(0.0, 1, 4, Arc::from_endpoints(0.0, 0.5, EndpointKind::RightOpen)).count, 2);
  EXPECT_EQ(rational_orbit_count(0.0, 1, 4, Arc::from_endpoints(0.0, 0.5, EndpointKind::Closed)).count, 3);
  EXPECT_EQ(rational_orbit_count(0.0, 1, 4, Arc::from_endpoints(0.0, 0.5, EndpointKind::Open)).count, 1);
  const RationalCount r = rational_orbit_count(0.0, 3, 4, Arc::from_endpoints(0.0, 0.5, EndpointKind::Open));
  EXPECT_EQ(r.lower, 1);
  EXPECT_EQ(r.upper, 3);
  EXPECT_TRUE(r.within_bounds);
  EXPECT_THROW(rational_orbit_count(0.0, 2, 4, Arc::full_circle()), DomainError);
  EXPECT_THROW(rational_orbit_count(0.0, 1, 0, Arc::full_circle()), DomainError);
}

TEST(RationalOrbitCount, Enumerated) {
  const RationalCount a = rational_orbit_count(0.0, 1, 4, Arc::from_endpoints(0.0, 0.26));
  EXPECT_EQ(a.count, 2);
  EXPECT_EQ(a.upper, 2);
  EXPECT_TRUE(a.within_bounds);
  EXPECT_EQ(rational_orbit_count(0.0, 1, 3, Arc::full_circle()).count, 3);
  EXPECT_EQ(rational_orbit_count(0.1, 1, 2, Arc::from_endpoints(0.55, 0.65)).count, 1);
}

TEST(OrbitFrequency, WeylRateForQuadraticIrrationals) {
  for (double rho : {kGolden, std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0}) {
    RotationProblem p;
    p.rho = rho;
    p.c = 0.21;
    p.limit = Arc::from_endpoints(0.3, 0.67);
    const std::int64_t n = 1'000'000;
    const FrequencyTrace t = orbit_frequency(p, n);
    double K = 0.0;
    for (std::int64_t j = 1000; j <= n; j += 997) {
      const double dj = static_cast<double>(j);
      K = std::max(K, std::fabs(t.psi(j) - p.limit.measure()) * dj / std::log(dj));
    }
    EXPECT_LT(K, 3.0) << rho;
  }
}

TEST(OrbitFrequency, SmallDriftKeepsRationalCounts) {
  RotationProblem clean;
  clean.rho = 2.0 / 7.0;
  clean.c = 0.05;
  clean.limit = Arc::from_endpoints(0.1, 0.6);
  // orbit points sit at 0.05 + j/7, at least 0.014 from either endpoint
  RotationProblem drifted = clean;
  drifted.drift = [](std::int64_t j) { return 0.01 * std::cos(static_cast<double>(j)); };
  const FrequencyTrace a = orbit_frequency(clean, 5000);
  const FrequencyTrace b = orbit_frequency(drifted, 5000);
  EXPECT_EQ(a.hits, b.hits);
}

TEST(OrbitFrequency, Sandwich) {
  RotationProblem p;
  p.rho = std::sqrt(2.0) - 1.0;
  p.c = 0.4;
  p.limit = Arc::from_endpoints(0.2, 0.5);
  RotationProblem inner = p, outer = p;
  inner.limit = p.limit.shrunk(0.01);
  outer.limit = p.limit.enlarged(0.01);
  const FrequencyTrace t = orbit_frequency(p, 20000), ti = orbit_frequency(inner, 20000),
                       to = orbit_frequency(outer, 20000);
  for (std::int64_t j = 1; j <= 20000; ++j) {
    ASSERT_LE(ti.count(j), t.count(j));
    ASSERT_LE(t.count(j), to.count(j));
  }
  EXPECT_TRUE(check_rotation(p, 20000).pass());
}

TEST(RationalOrbitCount, BoundsForSmallDenominators) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const EndpointKind kinds[] = {EndpointKind::Closed, EndpointKind::Open, EndpointKind::LeftOpen,
                                EndpointKind::RightOpen};
  for (std::int64_t q = 1; q <= 50; ++q) {
    for (std::int64_t p = 0; p < q; ++p) {
      if (gcd(p, q) != 1) continue;
      for (int trial = 0; trial < 10; ++trial) {
        const double a = u(rng);
        const Arc arc = Arc::from_endpoints(a, a + u(rng), kinds[trial % 4]);
        const RationalCount r = rational_orbit_count(u(rng), p, q, arc);
        EXPECT_TRUE(r.within_bounds) << p << "/" << q << " count " << r.count;
      }
    }
  }
}

TEST(RationalOrbit, FrequencyBoundsHold) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int64_t q : {2, 3, 5, 7, 12, 50}) {
    RotationProblem p;
    p.rho = 1.0 / static_cast<double>(q);
    p.c = u(rng);
    const double a = u(rng);
    p.limit = Arc::from_endpoints(a, a + 0.8 * u(rng));
    const FrequencyTrace t = orbit_frequency(p, 20000);
    const Prediction pred = predicted_limit(p.rho, p.limit);
    ASSERT_EQ(pred.q, q);
    EXPECT_TRUE(pred.satisfied_by(t.liminf_est, t.limsup_est)) << q;
  }
}

TEST(TailWindow, Rule) {
  EXPECT_EQ(tail_window(100), 100);
  EXPECT_EQ(tail_window(5000), 1000);
  EXPECT_EQ(tail_window(100000), 10000);
  EXPECT_EQ(tail_window(100000, 20000), 20000);
}

}  // namespace
}  // namespace polycycle
