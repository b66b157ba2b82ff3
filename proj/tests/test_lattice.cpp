#include "oracles.hpp"

#include <qwalk/lattice.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace qwalk;

namespace
{

ScalarField random_scalar(std::size_t n, unsigned seed)
{
    ScalarField f(n);
    f.amp = oracle::random_state(n, seed);
    return f;
}

} // namespace

TEST(Ring, CentersOriginAtHalf)
{
    const Ring ring(8);
    EXPECT_EQ(ring.index(0), 4u);
    EXPECT_EQ(ring.index(-4), 0u);
    EXPECT_EQ(ring.index(3), 7u);
    EXPECT_EQ(ring.index(4), 0u);
    EXPECT_EQ(ring.site(0), -4);
    EXPECT_EQ(ring.site(7), 3);
}

TEST(MomentumGrid, SpansMinusPiToPi)
{
    const MomentumGrid g(16);
    EXPECT_DOUBLE_EQ(g[0], -pi);
    EXPECT_NEAR(g.spacing(), 2 * pi / 16, 1e-15);
    EXPECT_LT(g[15], pi);
}

TEST(Dft, DeltaIsFlat)
{
    const auto ft = dft_ring(delta_scalar(32));
    for (const auto& z : ft.amp) {
        EXPECT_NEAR(std::abs(z), 1.0 / std::sqrt(32.0), 1e-15);
    }
}

TEST(Dft, MatchesNaiveTransform)
{
    const auto f = random_scalar(24, 3);
    const auto ft = dft_ring(f);
    const auto ref = oracle::naive_dft(f.amp);
    for (std::size_t m = 0; m < ref.size(); ++m) {
        EXPECT_NEAR(std::abs(ft.amp[m] - ref[m]), 0.0, 1e-13);
    }
}

TEST(Dft, RoundTripAndParseval)
{
    for (std::size_t n : {8u, 64u, 512u}) {
        const auto f = random_scalar(n, static_cast<unsigned>(n));
        const auto ft = dft_ring(f);
        double spec_norm = 0.0;
        for (const auto& z : ft.amp) {
            spec_norm += std::norm(z);
        }
        EXPECT_NEAR(spec_norm, norm2(f), 1e-13);
        EXPECT_LE(distance(idft_ring(ft), f), 1e-13) << "N=" << n;
    }
}

TEST(Dft, PlaneWaveConcentrates)
{
    const std::size_t N = 64;
    const MomentumGrid g(N);
    const std::size_t m0 = 40;
    ScalarField f(N);
    for (std::size_t i = 0; i < N; ++i) {
        f.amp[i] = std::polar(1.0 / std::sqrt(double(N)), g[m0] * double(f.ring.site(i)));
    }
    const auto ft = dft_ring(f);
    for (std::size_t m = 0; m < N; ++m) {
        EXPECT_NEAR(std::abs(ft.amp[m]), m == m0 ? 1.0 : 0.0, 1e-13);
    }
}

TEST(Dft, RejectsNonFinite)
{
    ScalarField f(8);
    f.amp[2] = {std::nan(""), 0.0};
    EXPECT_THROW(dft_ring(f), std::domain_error);
}

TEST(Density, ScalarIgnoresPhase)
{
    ScalarField f(16);
    f(3) = cplx(0.0, 1.0);
    const auto p = density(f);
    EXPECT_DOUBLE_EQ(p(3), 1.0);
    EXPECT_DOUBLE_EQ(total(p), 1.0);
}

TEST(Density, TotalsMatchNorm)
{
    const auto f = random_scalar(100, 9);
    const auto p = density(f);
    EXPECT_NEAR(total(p), 1.0, 1e-13);
    for (double v : p.p) {
        EXPECT_GE(v, 0.0);
    }
}

TEST(L1Distance, IdentityAndDisjoint)
{
    const auto a = density(delta_scalar(16, 0));
    const auto b = density(delta_scalar(16, 1));
    EXPECT_EQ(l1_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(l1_distance(a, b), 2.0);
    EXPECT_DOUBLE_EQ(l1_distance(b, a), 2.0);
}

TEST(L1Distance, SizeMismatchThrows)
{
    EXPECT_THROW(l1_distance(ProbabilityField(8), ProbabilityField(10)), std::invalid_argument);
}

TEST(ClampProbability, OnlyRoundoffNegatives)
{
    EXPECT_EQ(clamp_probability(-1e-16), 0.0);
    EXPECT_EQ(clamp_probability(-1e-10), -1e-10);
    EXPECT_EQ(clamp_probability(0.3), 0.3);
}

TEST(WindowGuard, RequiredSites)
{
    EXPECT_EQ(required_sites(0.25, 100), 130u);
    EXPECT_TRUE(window_ok(256, 0.25, 100));
    EXPECT_FALSE(window_ok(128, 0.25, 100));
}
