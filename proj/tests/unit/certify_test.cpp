#include <gtest/gtest.h>

#include <cmath>

#include "polycycle/certify.hpp"
#include "polycycle/errors.hpp"

namespace polycycle {
namespace {

TEST(Certify, PurePowerHasTightBoundsAndExemption) {
  const PowerLawModel m({1.0, 0.5, 0.0, 1.0, false, 0.5});
  const EstimateCertificate cert = certify_estimates(m);
  EXPECT_TRUE(cert.pass);
  // Δ/x^Λ is identically 1 and x D_xΔ/Δ identically Λ.
  EXPECT_NEAR(cert.worst_ratios.map_min, 1.0, 1e-12);
  EXPECT_NEAR(cert.worst_ratios.map_max, 1.0, 1e-12);
  EXPECT_NEAR(cert.worst_ratios.dx_min, 0.5, 1e-12);
  EXPECT_NEAR(cert.C, 1.0, 1e-3);
  const CheckTally* deps = cert.find(property::kEpsDerivativeBounds);
  ASSERT_NE(deps, nullptr);
  EXPECT_EQ(deps->status, CheckStatus::Exempt);
  EXPECT_FALSE(cert.exemptions.empty());
}

TEST(Certify, PerturbedAdditiveModelPasses) {
  const PowerLawModel m({1.0, 0.5, 0.1, 1.0, true, 0.5});
  const EstimateCertificate cert = certify_estimates(m);
  EXPECT_TRUE(cert.pass);
  EXPECT_LT(cert.c, 1.0);
  EXPECT_GT(cert.C, 1.0);
  EXPECT_TRUE(std::isfinite(cert.C));
  EXPECT_EQ(cert.find(property::kEpsDerivativeBounds)->status, CheckStatus::Pass);
  EXPECT_EQ(cert.find(property::kPerturbationDistance)->status, CheckStatus::Pass);
}

TEST(Certify, NegativeFactorFails) {
  const PowerLawModel m({1.0, 0.5, -3.0, 1.0, false, 0.5});
  const EstimateCertificate cert = certify_estimates(m);
  EXPECT_FALSE(cert.pass);
  EXPECT_FALSE(cert.failures.empty());
}

TEST(Certify, ShippedModelsPass) {
  for (const auto& named : shipped_models()) {
    const EstimateCertificate cert = certify_estimates(PowerLawModel(named.params));
    EXPECT_TRUE(cert.pass) << named.name;
  }
}

TEST(Certify, DeterministicUnderJitterSeed) {
  const PowerLawModel m({1.0, 0.5, 0.1, 1.0, true, 0.5});
  GridSpec grid;
  grid.jitter = 0.5;
  grid.seed = 42;
  const auto a = certify_estimates(m, grid);
  const auto b = certify_estimates(m, grid);
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.C, b.C);
  grid.seed = 43;
  const auto c = certify_estimates(m, grid);
  EXPECT_TRUE(c.pass);
}

TEST(Certify, EmptyGridIsADomainError) {
  GridSpec grid;
  grid.x_min = 0.9;
  EXPECT_THROW(certification_x_grid(0.5, grid), DomainError);
}

}  // namespace
}  // namespace polycycle
