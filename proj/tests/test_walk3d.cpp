#include "oracles.hpp"

#include <qwalk/fit.hpp>
#include <qwalk/walk3d.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

using namespace qwalk;

namespace
{

Matrix4c generator_exp(double angle, const Matrix4c& g)
{
    return (cplx(0.0, -angle) * g).exp();
}

} // namespace

TEST(Propagator3D, Examples)
{
    EXPECT_LE((propagator_3d({0, 0, 0}, 0.0, StepOrdering::naive).u - Matrix4c::Identity()).norm(), 1e-15);
    const Matrix4c coin = cplx(0.0, -1.0) * kron(pauli::x(), Matrix2c::Identity());
    for (auto o : {StepOrdering::naive, StepOrdering::symmetric}) {
        EXPECT_LE((propagator_3d({0, 0, 0}, pi / 2, o).u - coin).norm(), 1e-15);
    }
    const auto a = propagator_3d({0.3, 0, 0}, 0.8, StepOrdering::naive).u;
    const auto b = propagator_3d({0.3, 0, 0}, 0.8, StepOrdering::symmetric).u;
    EXPECT_LE((a - b).norm(), 1e-14);
}

TEST(Propagator3D, MatchesPadeProducts)
{
    const Momentum3 k{0.4, -1.3, 2.2};
    const double th = 0.7;
    const Matrix2c id = Matrix2c::Identity();
    const Matrix4c ref = generator_exp(k[0], kron(pauli::z(), pauli::x()))
                         * generator_exp(k[1], kron(pauli::z(), pauli::y()))
                         * generator_exp(k[2], kron(pauli::z(), pauli::z())) * generator_exp(th, kron(pauli::x(), id));
    EXPECT_LE((propagator_3d(k, th, StepOrdering::naive).u - ref).norm(), 1e-13);
}

TEST(Propagator3D, Unitary)
{
    const auto r = oracle::random_state(60, 33);
    for (std::size_t i = 0; i + 1 < r.size(); i += 2) {
        const Momentum3 k{6 * r[i].real(), 6 * r[i].imag(), 6 * r[i + 1].real()};
        for (auto o : {StepOrdering::naive, StepOrdering::symmetric}) {
            const auto u = propagator_3d(k, 3 * std::abs(r[i + 1].imag()), o).u;
            EXPECT_LE((u.adjoint() * u - Matrix4c::Identity()).norm(), 1e-13);
        }
    }
}

TEST(ZerothOrderDefect, SymmetricVanishesNaiveDoesNot)
{
    EXPECT_LE(zeroth_order_defect({0.7, 0.9, 1.1}, StepOrdering::symmetric), 1e-13);
    EXPECT_GE(zeroth_order_defect({pi / 4, pi / 4, 0}, StepOrdering::naive), 0.5);
    EXPECT_LE(zeroth_order_defect({0, 0, 0}, StepOrdering::naive), 1e-15);
    double naive_max = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            for (int l = 0; l < 5; ++l) {
                const Momentum3 k{-pi + 2 * pi * i / 5, -pi + 2 * pi * j / 5, -pi + 2 * pi * l / 5};
                EXPECT_LE(zeroth_order_defect(k, StepOrdering::symmetric), 1e-13);
                naive_max = std::max(naive_max, zeroth_order_defect(k, StepOrdering::naive));
            }
        }
    }
    EXPECT_GE(naive_max, 0.1);
}

TEST(LimitHamiltonian3D, Examples)
{
    const auto h0 = limit_hamiltonian_3d({0, 0, 0}, 0.125).matrix();
    EXPECT_LE((h0 + 0.25 * kron(pauli::x(), Matrix2c::Identity())).norm(), 1e-16);
    const Eigen::SelfAdjointEigenSolver<Matrix4c> es(limit_hamiltonian_3d({0.5, 0.7, 0.9}, 0.125).matrix());
    const double e = 0.10430804332723840;
    EXPECT_NEAR(es.eigenvalues()(0), -e, 1e-14);
    EXPECT_NEAR(es.eigenvalues()(1), -e, 1e-14);
    EXPECT_NEAR(es.eigenvalues()(2), e, 1e-14);
    EXPECT_NEAR(es.eigenvalues()(3), e, 1e-14);
}

TEST(LimitHamiltonian3D, EigenvalueIdentityOnGrid)
{
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            for (int l = 0; l < 7; ++l) {
                const Momentum3 k{-pi + 2 * pi * i / 7, -pi + 2 * pi * j / 7, -pi + 2 * pi * l / 7};
                const auto f = limit_hamiltonian_3d(k, 0.125);
                const double prod = std::cos(k[0]) * std::cos(k[1]) * std::cos(k[2]);
                const double r = std::sqrt(f.a * f.a + f.b[0] * f.b[0] + f.b[1] * f.b[1] + f.b[2] * f.b[2]);
                EXPECT_NEAR(r, std::abs(prod), 1e-14);
                const Matrix4c h = f.matrix();
                EXPECT_LE((h - h.adjoint()).norm(), 0.0);
                EXPECT_NEAR(std::abs(h.trace()), 0.0, 1e-16);
                EXPECT_LE((h * h - std::pow(2 * 0.125 * prod, 2) * Matrix4c::Identity()).norm(), 1e-13);
            }
        }
    }
}

TEST(EffectiveGenerator, ConvergesToLimitHamiltonian)
{
    const Momentum3 k{0.5, 0.7, 0.9};
    const double g = 0.125;
    const auto target = limit_hamiltonian_3d(k, g).matrix();
    auto err = [&](double d) {
        return (effective_generator_3d(k, d, g, StepOrdering::symmetric).h - target).norm();
    };
    EXPECT_LE(err(0.01), 0.01);
    EXPECT_NEAR(err(0.02) / err(0.01), 2.0, 0.3);
    const std::vector<double> ds{0.04, 0.02, 0.01, 0.005};
    std::vector<double> es;
    for (double d : ds) {
        es.push_back(err(d));
    }
    EXPECT_NEAR(loglog_slope(ds, es), 1.0, 0.2);
}

TEST(EffectiveGenerator, IsHermitian)
{
    const auto h = effective_generator_3d({0.2, -0.4, 1.3}, 0.05, 0.125, StepOrdering::symmetric).h;
    EXPECT_LE((h - h.adjoint()).norm(), 1e-12);
}

TEST(EffectiveGenerator, NaiveFlaggedWithoutLimit)
{
    const auto g = effective_generator_3d({pi / 4, pi / 4, 0}, 0.01, 0.125, StepOrdering::naive);
    EXPECT_FALSE(g.continuous_limit);
    EXPECT_GE(g.defect, 0.5);
}

TEST(EffectiveGenerator, Errors)
{
    EXPECT_THROW(effective_generator_3d({0, 0, 0}, 0.0, 0.125, StepOrdering::symmetric), std::domain_error);
    EXPECT_THROW(effective_generator_3d({0, 0, 0}, 0.31, 0.125, StepOrdering::symmetric), std::domain_error);
    // -U^2 = -1 * (...) reaches the branch cut once delta is large enough at this k
    EXPECT_THROW(detail::unitary_log(-Matrix4c::Identity()), std::domain_error);
}

namespace
{

Eigen::MatrixXd corner_hamiltonian(std::size_t n, double g)
{
    const auto N = static_cast<Eigen::Index>(n * n * n);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N, N);
    auto flat = [n](std::size_t x, std::size_t y, std::size_t z) {
        return static_cast<Eigen::Index>((x * n + y) * n + z);
    };
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t z = 0; z < n; ++z) {
                for (int dx : {-1, 1}) {
                    for (int dy : {-1, 1}) {
                        for (int dz : {-1, 1}) {
                            h(flat(x, y, z), flat((x + n + dx) % n, (y + n + dy) % n, (z + n + dz) % n)) -= g / 4;
                        }
                    }
                }
            }
        }
    }
    return h;
}

} // namespace

TEST(Ctqw3D, MatchesDenseExponential)
{
    const std::size_t n = 8;
    Scalar3DField f({n, n, n});
    const auto r = oracle::random_state(n * n * n, 44);
    f.amp = r;
    const double g = 0.125;
    const double t = 10.0;
    const auto out = ctqw3d_evolve(f, g, t);
    const Eigen::VectorXcd ref = oracle::dense_evolve(
        corner_hamiltonian(n, g), Eigen::Map<const Eigen::VectorXcd>(r.data(), static_cast<Eigen::Index>(r.size())), t);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        worst = std::max(worst, std::abs(out.amp[i] - ref(static_cast<Eigen::Index>(i))));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Ctqw3D, IdentityNormAndPlaneWave)
{
    const std::size_t n = 16;
    Scalar3DField f({n, n, n});
    f.at(0, 0, 0) = 1.0;
    EXPECT_EQ(ctqw3d_evolve(f, 0.125, 0.0).amp, f.amp);
    EXPECT_NEAR(norm2(ctqw3d_evolve(f, 0.125, 6.0)), 1.0, 1e-12);

    Scalar3DField w({n, n, n});
    const Momentum3 k{2 * pi * 3 / n, -2 * pi * 5 / n, 2 * pi * 1 / n};
    for (std::int64_t x = -8; x < 8; ++x) {
        for (std::int64_t y = -8; y < 8; ++y) {
            for (std::int64_t z = -8; z < 8; ++z) {
                w.at(x, y, z) = std::polar(1.0 / 64.0, k[0] * x + k[1] * y + k[2] * z);
            }
        }
    }
    const double t = 3.7;
    const auto out = ctqw3d_evolve(w, 0.125, t);
    const cplx ratio = out.at(1, 2, 3) / w.at(1, 2, 3);
    EXPECT_NEAR(std::arg(ratio), std::remainder(-ctqw3d_energy(k, 0.125) * t, 2 * pi), 1e-12);

    Scalar3DField zero_k({n, n, n});
    for (auto& z : zero_k.amp) {
        z = 1.0 / 64.0;
    }
    const auto out0 = ctqw3d_evolve(zero_k, 0.125, t);
    EXPECT_NEAR(std::abs(out0.amp[5] - zero_k.amp[5] * std::polar(1.0, 2 * 0.125 * t)), 0.0, 1e-14);
}

TEST(Ctqw3D, OddExtentRejected)
{
    EXPECT_THROW(Scalar3DField({8, 7, 8}), std::invalid_argument);
}
