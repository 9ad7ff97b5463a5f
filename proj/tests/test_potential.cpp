#include "kgwell/potential.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using kgwell::PotentialParams;
using kgwell::Region;

TEST(PotentialValue, Examples)
{
    const PotentialParams p{2.0, 0.5, -1.0};
    EXPECT_DOUBLE_EQ(kgwell::potential_value(p, -0.5), -2.0);
    EXPECT_NEAR(kgwell::potential_value(p, 0.5), -2.0 * std::exp(-1.0), 1e-15);
    const PotentialParams cusp{2.0, 0.5, 0.0};
    EXPECT_NEAR(kgwell::potential_value(cusp, -0.3), -2.0 * std::exp(-0.6), 1e-15);
    EXPECT_DOUBLE_EQ(kgwell::potential_value(cusp, -0.3), kgwell::potential_value(cusp, 0.3));
}

TEST(PotentialValue, MirrorSymmetry)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const PotentialParams p{0.1 + 5.0 * u(rng), 0.01 + u(rng), -3.0 * u(rng)};
        const double x = -20.0 + 40.0 * u(rng);
        EXPECT_NEAR(kgwell::potential_value(p, p.x0 - x), kgwell::potential_value(p, x), 1e-14 * p.v0);
    }
}

TEST(PotentialValue, BoundsAndDecay)
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const PotentialParams p{0.1 + 5.0 * u(rng), 0.05 + u(rng), -3.0 * u(rng)};
        const double x = -15.0 + 30.0 * u(rng);
        const double v = kgwell::potential_value(p, x);
        EXPECT_GE(v, -p.v0);
        EXPECT_LT(v, 0.0);
    }
    const PotentialParams p{2.0, 0.5, -1.0};
    EXPECT_LT(std::abs(kgwell::potential_value(p, 40.0)), 1e-30);
    EXPECT_LT(std::abs(kgwell::potential_value(p, -41.0)), 1e-30);
}

TEST(PotentialValue, ContinuousAtJoins)
{
    const PotentialParams p{2.73, 0.5, -0.5};
    for (double eps : {1e-8, 1e-9, 1e-12}) {
        for (double at : {p.x0, 0.0}) {
            EXPECT_LE(std::abs(kgwell::potential_value(p, at - eps) + p.v0), p.v0 * eps / p.a + 4e-16 * p.v0);
            EXPECT_LE(std::abs(kgwell::potential_value(p, at + eps) + p.v0), p.v0 * eps / p.a + 4e-16 * p.v0);
        }
    }
}

TEST(PotentialValue, SquareWellLimit)
{
    const PotentialParams p{2.73, 1e-3, -0.5};
    for (int i = 0; i <= 4000; ++i) {
        const double x = -2.0 + 3.0 * i / 4000.0;
        if (std::abs(x - p.x0) < 10.0 * p.a || std::abs(x) < 10.0 * p.a)
            continue;
        const double square = (x >= p.x0 && x <= 0.0) ? -p.v0 : 0.0;
        EXPECT_LE(std::abs(kgwell::potential_value(p, x) - square), 0.01 * p.v0) << "x=" << x;
    }
}

TEST(RegionOf, Examples)
{
    const PotentialParams p{1.0, 0.5, -1.0};
    EXPECT_EQ(kgwell::region_of(p, -2.0), Region::I);
    EXPECT_EQ(kgwell::region_of(p, -1.0), Region::II);
    EXPECT_EQ(kgwell::region_of(p, 0.0), Region::II);
    EXPECT_EQ(kgwell::region_of(p, 1e-12), Region::III);
    const PotentialParams cusp{1.0, 0.5, 0.0};
    EXPECT_EQ(kgwell::region_of(cusp, 0.0), Region::II);
    EXPECT_EQ(kgwell::region_of(cusp, -1e-12), Region::I);
    EXPECT_STREQ(kgwell::to_string(Region::III), "III");
}

TEST(PotentialParams, Validation)
{
    EXPECT_NO_THROW((PotentialParams{1.0, 0.5, 0.0}.validate()));
    EXPECT_THROW((PotentialParams{0.0, 0.5, 0.0}.validate()), kgwell::InvalidParameter);
    EXPECT_THROW((PotentialParams{1.0, -0.5, 0.0}.validate()), kgwell::InvalidParameter);
    EXPECT_THROW((PotentialParams{1.0, 0.5, 0.1}.validate()), kgwell::InvalidParameter);
    EXPECT_THROW((PotentialParams{NAN, 0.5, 0.0}.validate()), kgwell::InvalidParameter);
}

TEST(EnergyQuantities, TableOneEnergy)
{
    // mpmath at 50 digits; the rounding of E already moves these in the 5th digit.
    const auto q = kgwell::energy_quantities({2.73, 0.5, -0.5}, -0.979087);
    EXPECT_NEAR(q.mu, 0.1017209988534816, 1e-14);
    EXPECT_NEAR(q.q.real(), 1.437253051334037, 1e-14);
    EXPECT_EQ(q.q.imag(), 0.0);
    EXPECT_NEAR(q.kappa.imag(), 0.5 * 0.979087, 1e-15);
    EXPECT_EQ(q.kappa.real(), 0.0);
    EXPECT_DOUBLE_EQ(q.mu, 0.5 * q.lambda);
    EXPECT_NEAR(std::norm(q.q), (2.73 - 0.979087) * (2.73 - 0.979087) - 1.0, 1e-14);
}

TEST(EnergyQuantities, ZeroEnergy)
{
    for (double a : {0.1, 0.5, 3.0}) {
        const auto q = kgwell::energy_quantities({1.0, a, -0.5}, 0.0);
        EXPECT_EQ(q.kappa, kgwell::Complex(0.0, 0.0));
        EXPECT_DOUBLE_EQ(q.mu, a);
        EXPECT_DOUBLE_EQ(q.lambda, 1.0);
    }
}

TEST(EnergyQuantities, ImaginaryWavenumber)
{
    const auto q = kgwell::energy_quantities({0.5, 0.5, -0.5}, 0.4);
    EXPECT_NEAR(q.q.real(), 0.0, 1e-16);
    EXPECT_NEAR(q.q.imag(), 0.435889894354067, 1e-14);
}

TEST(EnergyQuantities, InvariantsOnRandomInputs)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const PotentialParams p{0.1 + 4.0 * u(rng), 0.01 + u(rng), -2.0 * u(rng)};
        const double e = -0.999 + 1.998 * u(rng);
        const auto q = kgwell::energy_quantities(p, e);
        EXPECT_GE(q.mu, 0.0);
        EXPECT_NEAR(q.mu, p.a * q.lambda, 1e-15);
        EXPECT_EQ(q.kappa.real(), 0.0);
        const double qq = (e + p.v0) * (e + p.v0) - 1.0;
        EXPECT_NEAR((q.q * q.q).real(), qq, 1e-14 * std::max(1.0, std::abs(qq)));
        EXPECT_NEAR((q.q * q.q).imag(), 0.0, 1e-14 * std::max(1.0, std::abs(qq)));
    }
}

TEST(EnergyQuantities, RejectsContinuum)
{
    const PotentialParams p{1.0, 0.5, 0.0};
    EXPECT_THROW(kgwell::energy_quantities(p, 1.0), kgwell::OutOfWindow);
    EXPECT_THROW(kgwell::energy_quantities(p, -1.0), kgwell::OutOfWindow);
    EXPECT_THROW(kgwell::energy_quantities(p, 1.5), kgwell::OutOfWindow);
    EXPECT_THROW(kgwell::energy_quantities(p, NAN), kgwell::OutOfWindow);
}
