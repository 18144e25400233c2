#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polycycle/certify.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/map_family.hpp"

namespace polycycle {
namespace {

PowerLawParams sqrt_additive() { return {1.0, 0.5, 0.0, 1.0, true, 0.5}; }

TEST(EvalMap, Examples) {
  const PowerLawModel half(sqrt_additive());
  EXPECT_DOUBLE_EQ(eval_map(half, 0.0, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(eval_map(half, 0.01, 0.25), 0.51);
  const PowerLawModel quad({2.0, 2.0, 0.0, 1.0, false, 0.25});
  EXPECT_NEAR(eval_map(quad, 0.0, 0.1), 0.02, 1e-17);
}

TEST(EvalMap, DomainChecks) {
  const PowerLawModel half(sqrt_additive());
  EXPECT_THROW(eval_map(half, 0.0, 0.6), DomainError);
  EXPECT_THROW(eval_map(half, 0.3, 0.2), DomainError);   // ε > x
  EXPECT_THROW(eval_map(half, -0.1, 0.2), DomainError);
  const PowerLawModel bad({1.0, 0.5, -3.0, 1.0, false, 0.5});
  EXPECT_THROW(eval_map(bad, 0.0, 0.4), DomainError);    // 1 - 3x < 0
}

TEST(IterateMap, Examples) {
  const PowerLawModel half({1.0, 0.5, 0.0, 1.0, false, 0.5});
  EXPECT_NEAR(iterate_map(half, 0.0, std::ldexp(1.0, -16), 3), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(iterate_map(half, 0.0, 0.1, 0), 0.1);
  const PowerLawModel square({1.0, 2.0, 0.0, 1.0, false, 0.9});
  EXPECT_NEAR(iterate_map(square, 0.0, 0.5, 4), std::pow(0.5, 16), 1e-19);
}

TEST(IterateMap, ReportsEscapeStep) {
  const PowerLawModel half({1.0, 0.5, 0.0, 1.0, false, 0.5});
  try {
    iterate_map(half, 0.0, 0.01, 5);  // 0.1, 0.316, 0.562 -> out at step 3
    FAIL();
  } catch (const EscapedDomain& e) {
    EXPECT_EQ(e.step(), 3);
  }
}

TEST(IterateMapU, AgreesWithDirectIterationAndGoesBeyondDoubles) {
  const PowerLawModel model({1.0, 0.5, 0.1, 1.0, true, 0.5});
  const double eps = 1e-6, x = 1e-6;
  double direct = x;
  for (int k = 0; k < 4; ++k) direct = model.value(eps, direct);
  const OrbitU orbit = iterate_map_u(model, -std::log(eps), -std::log(x), 4);
  EXPECT_NEAR(orbit.u, -std::log(direct), 1e-13);

  const PowerLawModel quad({1.0, 2.0, 0.0, 1.0, false, 0.5});
  const OrbitU deep = iterate_map_u(quad, kZeroEpsU, std::log(10.0), 60);
  EXPECT_FALSE(deep.escaped());
  EXPECT_NEAR(deep.u / (std::ldexp(1.0, 60) * std::log(10.0)), 1.0, 1e-14);
}

TEST(PowerLawModel, AnalyticDerivativesMatchFiniteDifferences) {
  for (const auto& named : shipped_models()) {
    const PowerLawModel m(named.params);
    GridSpec grid;
    grid.points_per_decade = 8;
    for (double x : certification_x_grid(m.domain_radius(), grid)) {
      if (x > 0.999 * m.domain_radius()) continue;
      const double eps = m.depends_on_eps() ? 0.5 * x : 0.0;
      const double fd = testing::central_difference([&](double t) { return m.value(eps, t); }, x, 1e-7 * x);
      EXPECT_NEAR(m.d_dx(eps, x) / fd, 1.0, 1e-5) << named.name << " x=" << x;
      if (m.depends_on_eps()) {
        // The step must be large next to ulp(Δ), which dwarfs x near 0.
        const double fde = testing::central_difference([&](double e) { return m.value(e, x); }, eps, 0.25 * eps);
        EXPECT_NEAR(m.d_deps(eps, x), fde, 1e-6) << named.name;
      }
    }
  }
}

TEST(PowerLawModel, AdditiveEpsShiftsExactly) {
  std::mt19937_64 rng(5);
  for (const auto& named : shipped_models()) {
    if (!named.params.additive_eps) continue;
    const PowerLawModel m(named.params);
    std::uniform_real_distribution<double> xs(1e-9, m.domain_radius());
    for (int i = 0; i < 200; ++i) {
      const double x = xs(rng);
      const double eps = 0.3 * x;
      EXPECT_NEAR(m.value(eps, x) - m.value(0.0, x), eps, 4e-16 * m.value(eps, x));
      EXPECT_EQ(m.d_deps(eps, x), 1.0);
    }
  }
}

TEST(PowerLawModel, IteratesIncreaseWithEps) {
  const PowerLawModel m({1.0, 0.5, 0.1, 1.0, true, 0.5});
  for (double x : {1e-8, 1e-5, 1e-3}) {
    double prev = 0.0;
    for (int j = 0; j <= 8; ++j) {
      const double eps = x * j / 8.0;
      const double v = iterate_map(m, eps, x, 3);
      if (j > 0) EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(PowerLawModel, RejectsBadParameters) {
  EXPECT_THROW(PowerLawModel({0.0, 0.5, 0, 1, false, 0.5}), InvalidConfig);
  EXPECT_THROW(PowerLawModel({1.0, -1.0, 0, 1, false, 0.5}), InvalidConfig);
  EXPECT_THROW(PowerLawModel({1.0, 0.5, 0, 0.0, false, 0.5}), InvalidConfig);
  EXPECT_THROW(PowerLawModel({1.0, 0.5, 0, 1, false, 1.5}), InvalidConfig);
}

TEST(InverseMap, InvertsTheBaseMap) {
  const auto base = make_power_law({1.0, 0.5, 0.1, 1.0, true, 0.5});
  const InverseMap inv(base);
  EXPECT_DOUBLE_EQ(inv.exponent(), 2.0);
  EXPECT_LE(inv.domain_radius(), 0.5);
  for (double u : {1.0, 3.0, 20.0, 500.0, 1e6}) {
    const double back = base->step_u(kZeroEpsU, inv.step_u(kZeroEpsU, u));
    EXPECT_NEAR(back / u, 1.0, 1e-13) << u;
  }
}

TEST(InvertStepU, ClosedFormAndBisectionAgree) {
  const auto closed = make_power_law({1.5, 0.5, 0.0, 1.0, false, 0.5});
  // The perturbed model with a tiny a forces the bisection path.
  const auto numeric = make_power_law({1.5, 0.5, 1e-300, 1.0, false, 0.5});
  for (double u : {2.0, 10.0, 1000.0}) {
    EXPECT_NEAR(invert_step_u(*closed, kZeroEpsU, u) / invert_step_u(*numeric, kZeroEpsU, u), 1.0, 1e-13);
  }
}

}  // namespace
}  // namespace polycycle
