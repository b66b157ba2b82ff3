// Discrete-time quantum walk with coin exp(-i theta sigma_x): real-space
// stepping, the per-momentum propagator, dispersion, and the symmetric
// entangled initial state.

#ifndef QWALK_DTQW_HPP
#define QWALK_DTQW_HPP

#include "lattice.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qwalk
{

using Matrix2c = Eigen::Matrix2cd;

struct DtqwParams
{
    double theta = pi / 4;
    std::size_t n_sites = 256;
    std::size_t steps = 0;

    [[nodiscard]] double delta() const noexcept { return pi / 2 - theta; }
    [[nodiscard]] double speed() const noexcept { return std::cos(theta); }
};

/// A 2x2 operator attached to one momentum value.
struct MomentumOperator2
{
    double k = 0.0;
    Matrix2c u = Matrix2c::Identity();
};

namespace pauli
{
inline Matrix2c x()
{
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}
inline Matrix2c y()
{
    Matrix2c m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
inline Matrix2c z()
{
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}
} // namespace pauli

/// One application of the walk: shift-after-coin, indices mod N.
inline SpinorField dtqw_step(const SpinorField& state, double theta)
{
    const double c = std::cos(theta);
    const cplx is = cplx(0.0, -std::sin(theta));
    const std::size_t N = state.size();
    SpinorField out(N);
    out.wraparound_risk = state.wraparound_risk;
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t from_left = (i + N - 1) % N;
        const std::size_t from_right = (i + 1) % N;
        out.right[i] = c * state.right[from_left] + is * state.left[from_left];
        out.left[i] = c * state.left[from_right] + is * state.right[from_right];
    }
    return out;
}

/// e^{-ik sigma_z} e^{-i theta sigma_x}.
inline MomentumOperator2 momentum_propagator(double k, double theta)
{
    const cplx em = std::polar(1.0, -k);
    const cplx ep = std::polar(1.0, k);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    MomentumOperator2 op{k, {}};
    op.u << em * c, em * cplx(0, -s), ep * cplx(0, -s), ep * c;
    return op;
}

namespace detail
{

inline Matrix2c matrix_power(Matrix2c base, std::size_t exponent)
{
    Matrix2c acc = Matrix2c::Identity();
    while (exponent > 0) {
        if (exponent & 1U) {
            acc = acc * base;
        }
        base = base * base;
        exponent >>= 1U;
    }
    return acc;
}

// U^tau for U in SU(2). With U = cos(w) I - i sin(w) n.sigma the power is
// cos(tau w) I + sin(tau w)/sin(w) (U - cos(w) I).
inline Matrix2c su2_power(const Matrix2c& u, std::size_t tau)
{
    const double cw = std::clamp(0.5 * u.trace().real(), -1.0, 1.0);
    const double w = std::acos(cw);
    const double sw = std::sin(w);
    if (sw < 1e-6) {
        return matrix_power(u, tau);
    }
    const double t = static_cast<double>(tau);
    return std::cos(t * w) * Matrix2c::Identity() + (std::sin(t * w) / sw) * (u - cw * Matrix2c::Identity());
}

} // namespace detail

/// tau-fold walk by real-space stepping.
inline SpinorField dtqw_evolve(const SpinorField& state, const DtqwParams& params)
{
    if (state.size() != params.n_sites) {
        throw std::invalid_argument("dtqw_evolve: state has " + std::to_string(state.size())
                                    + " sites, params say " + std::to_string(params.n_sites));
    }
    SpinorField cur = state;
    for (std::size_t s = 0; s < params.steps; ++s) {
        cur = dtqw_step(cur, params.theta);
    }
    if (!window_ok(state.size(), params.speed(), static_cast<double>(params.steps))) {
        cur.wraparound_risk = true;
    }
    return cur;
}

/// tau-fold walk by raising each U(k) to the tau-th power through its
/// eigenphases. Independent of dtqw_step; used to cross-check it.
inline SpinorField dtqw_evolve_momentum(const SpinorField& state, const DtqwParams& params)
{
    if (state.size() != params.n_sites) {
        throw std::invalid_argument("dtqw_evolve_momentum: size mismatch");
    }
    SpinorSpectrum ft = dft_ring(state);
    for (std::size_t m = 0; m < ft.grid.size(); ++m) {
        const Matrix2c ut = detail::su2_power(momentum_propagator(ft.grid[m], params.theta).u, params.steps);
        const cplx r = ft.right[m];
        const cplx l = ft.left[m];
        ft.right[m] = ut(0, 0) * r + ut(0, 1) * l;
        ft.left[m] = ut(1, 0) * r + ut(1, 1) * l;
    }
    SpinorField out = idft_ring(ft);
    out.wraparound_risk = state.wraparound_risk
                          || !window_ok(state.size(), params.speed(), static_cast<double>(params.steps));
    return out;
}

struct Dispersion
{
    double omega = 0.0;
    double group_velocity = 0.0;
};

inline constexpr double dispersion_step = 1e-6;

/// Positive eigenphase omega of U(k) (eigenvalues exp(-+ i omega)) and
/// d omega / dk by a centered difference.
inline Dispersion dispersion(double k, double theta)
{
    if (!(theta > 0.0) || theta > pi / 2) {
        throw std::domain_error("dispersion: theta must lie in (0, pi/2], got " + std::to_string(theta));
    }
    auto eigenphase = [theta](double q) {
        const Eigen::ComplexEigenSolver<Matrix2c> es(momentum_propagator(q, theta).u, false);
        // eigenvalues are exp(+-i omega); take the nonnegative phase
        return std::abs(std::arg(es.eigenvalues()(0)));
    };
    const double h = dispersion_step;
    return {eigenphase(k), (eigenphase(k + h) - eigenphase(k - h)) / (2.0 * h)};
}

/// psi_R = (delta_{n,0} + delta_{n,1})/2, psi_L = (delta_{n,-1} + delta_{n,0})/2.
inline SpinorField initial_symmetric_entangled(std::size_t n_sites)
{
    if (n_sites < 8) {
        throw std::invalid_argument("initial_symmetric_entangled: need at least 8 sites");
    }
    SpinorField f(n_sites);
    f.r(0) = 0.5;
    f.r(1) = 0.5;
    f.l(-1) = 0.5;
    f.l(0) = 0.5;
    return f;
}

/// Spinor with a single unit amplitude in the right- or left-moving component.
inline SpinorField spinor_delta(std::size_t n_sites, std::int64_t at, bool right_moving = true)
{
    SpinorField f(n_sites);
    (right_moving ? f.r(at) : f.l(at)) = 1.0;
    return f;
}

/// n -> -n with R <-> L exchanged.
inline SpinorField mirror(const SpinorField& f)
{
    SpinorField out(f.size());
    const auto half = static_cast<std::int64_t>(f.size() / 2);
    for (std::int64_t n = -half; n < half; ++n) {
        out.r(-n) = f.l(n);
        out.l(-n) = f.r(n);
    }
    out.wraparound_risk = f.wraparound_risk;
    return out;
}

} // namespace qwalk

#endif
