// Continuous-time walks on the ring. Everything here evolves spectrally:
// each momentum component picks up its exact phase, so no time step enters.
//
//  - scalar walk     i d/dt psi(n) = -gamma [psi(n+1) - 2 psi(n) + psi(n-1)]
//  - limit pair      i d/dt psi_R(n) = -gamma [psi_L(n) + psi_L(n-2)]
//                    i d/dt psi_L(n) = -gamma [psi_R(n) + psi_R(n+2)]
//
// The pair splits into two decoupled scalar walks with opposite Laplacian
// signs (chiral_decompose).

#ifndef QWALK_CTQW_HPP
#define QWALK_CTQW_HPP

#include "bessel.hpp"
#include "lattice.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qwalk
{

struct CtqwParams
{
    double gamma = 0.125;
    double time = 0.0;
    std::size_t n_sites = 256;

    /// Light-cone speed 2 gamma.
    [[nodiscard]] double speed() const noexcept { return 2.0 * gamma; }
};

namespace detail
{

inline void check_ctqw_params(const CtqwParams& p, std::size_t n_sites, const char* who)
{
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
        throw std::invalid_argument(std::string(who) + ": gamma must be positive and finite");
    }
    if (!(p.time >= 0.0) || !std::isfinite(p.time)) {
        throw std::invalid_argument(std::string(who) + ": time must be nonnegative and finite");
    }
    if (n_sites != p.n_sites) {
        throw std::invalid_argument(std::string(who) + ": state has " + std::to_string(n_sites)
                                    + " sites, params say " + std::to_string(p.n_sites));
    }
}

} // namespace detail

/// Energy of the plane wave e^{ikn} under the scalar walk.
inline double ctqw_energy(double k, double gamma) noexcept
{
    return 2.0 * gamma * (1.0 - std::cos(k));
}

/// Multiply each momentum component by exp(-i energy(k) t).
inline ScalarField evolve_spectral(const ScalarField& state, const std::function<double(double)>& energy,
                                   double time)
{
    ScalarSpectrum ft = dft_ring(state);
    for (std::size_t m = 0; m < ft.grid.size(); ++m) {
        ft.amp[m] *= std::polar(1.0, -energy(ft.grid[m]) * time);
    }
    ScalarField out = idft_ring(ft);
    out.wraparound_risk = state.wraparound_risk;
    return out;
}

inline ScalarField ctqw_evolve(const ScalarField& state, const CtqwParams& params)
{
    detail::check_ctqw_params(params, state.size(), "ctqw_evolve");
    if (params.time == 0.0) {
        return state;
    }
    const double g = params.gamma;
    ScalarField out = evolve_spectral(state, [g](double k) { return ctqw_energy(k, g); }, params.time);
    out.wraparound_risk = out.wraparound_risk || !window_ok(state.size(), params.speed(), params.time);
    return out;
}

/// e^{-2 i gamma t} i^n J_n(2 gamma t): the scalar walk started from delta_{n,0}.
inline cplx ctqw_analytic(std::int64_t n, const CtqwParams& params)
{
    const double x = 2.0 * params.gamma * params.time;
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return std::polar(1.0, -x) * i_pow[((n % 4) + 4) % 4] * bessel_j(n, x);
}

/// ctqw_analytic over every site of an N-site ring (no periodic images).
inline ScalarField ctqw_analytic_field(const CtqwParams& params)
{
    ScalarField f(params.n_sites);
    const double x = 2.0 * params.gamma * params.time;
    const auto half = static_cast<std::int64_t>(params.n_sites / 2);
    const auto j = bessel_j_sequence(half + 1, x);
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx phase = std::polar(1.0, -x);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::int64_t n = f.ring.site(i);
        const std::int64_t a = n < 0 ? -n : n;
        const double jn = (n < 0 && a % 2 == 1) ? -j[static_cast<std::size_t>(a)] : j[static_cast<std::size_t>(a)];
        f.amp[i] = phase * i_pow[((n % 4) + 4) % 4] * jn;
    }
    return f;
}

/// Exact evolution of the limit pair: per k,
/// exp(-iHt) = cos(2 gamma t cos k) I + i sin(2 gamma t cos k) M(k),
/// M(k) = [[0, e^{-ik}], [e^{ik}, 0]].
inline SpinorField limit_pair_evolve(const SpinorField& state, const CtqwParams& params)
{
    if (state.size() % 2 != 0) {
        throw std::invalid_argument("limit_pair_evolve: ring size must be even");
    }
    detail::check_ctqw_params(params, state.size(), "limit_pair_evolve");
    if (params.time == 0.0) {
        return state;
    }
    SpinorSpectrum ft = dft_ring(state);
    for (std::size_t m = 0; m < ft.grid.size(); ++m) {
        const double k = ft.grid[m];
        const double phase = 2.0 * params.gamma * params.time * std::cos(k);
        const cplx c = std::cos(phase);
        const cplx is = cplx(0.0, std::sin(phase));
        const cplx r = ft.right[m];
        const cplx l = ft.left[m];
        ft.right[m] = c * r + is * std::polar(1.0, -k) * l;
        ft.left[m] = c * l + is * std::polar(1.0, k) * r;
    }
    SpinorField out = idft_ring(ft);
    out.wraparound_risk = state.wraparound_risk || !window_ok(state.size(), params.speed(), params.time);
    return out;
}

/// psi_R = i^n (J_n - i J_{n-1}) / 2, psi_L = i^n (J_n + i J_{n+1}) / 2 at
/// argument 2 gamma t: the limit pair started from the symmetric entangled state.
inline std::pair<cplx, cplx> limit_analytic(std::int64_t n, const CtqwParams& params)
{
    const double x = 2.0 * params.gamma * params.time;
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx in = i_pow[((n % 4) + 4) % 4];
    const cplx i{0.0, 1.0};
    return {0.5 * in * (bessel_j(n, x) - i * bessel_j(n - 1, x)),
            0.5 * in * (bessel_j(n, x) + i * bessel_j(n + 1, x))};
}

inline SpinorField limit_analytic_field(const CtqwParams& params)
{
    SpinorField f(params.n_sites);
    const double x = 2.0 * params.gamma * params.time;
    const auto half = static_cast<std::int64_t>(params.n_sites / 2);
    const auto j = bessel_j_sequence(half + 2, x);
    auto jn = [&j](std::int64_t n) {
        const std::int64_t a = n < 0 ? -n : n;
        const double v = j[static_cast<std::size_t>(a)];
        return (n < 0 && a % 2 == 1) ? -v : v;
    };
    static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx i{0.0, 1.0};
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        const std::int64_t n = f.ring.site(idx);
        const cplx in = i_pow[((n % 4) + 4) % 4];
        f.right[idx] = 0.5 * in * (jn(n) - i * jn(n - 1));
        f.left[idx] = 0.5 * in * (jn(n) + i * jn(n + 1));
    }
    return f;
}

/// The two scalar-walk components of a limit-pair state.
struct ChiralPair
{
    SpinorField plus;
    SpinorField minus;
};

/// Psi_+ = e^{-2i gamma t}/2 (psi_R(n) + psi_L(n-1), psi_L(n) + psi_R(n+1)),
/// Psi_- = e^{+2i gamma t}/2 (psi_R(n) - psi_L(n-1), psi_L(n) - psi_R(n+1)).
inline ChiralPair chiral_decompose(const SpinorField& state, double gamma, double time)
{
    const std::size_t N = state.size();
    if (N % 2 != 0) {
        throw std::invalid_argument("chiral_decompose: ring size must be even");
    }
    const cplx ep = 0.5 * std::polar(1.0, -2.0 * gamma * time);
    const cplx em = 0.5 * std::polar(1.0, 2.0 * gamma * time);
    ChiralPair out{SpinorField(N), SpinorField(N)};
    for (std::size_t i = 0; i < N; ++i) {
        const cplx r = state.right[i];
        const cplx l = state.left[i];
        const cplx l_prev = state.left[(i + N - 1) % N];
        const cplx r_next = state.right[(i + 1) % N];
        out.plus.right[i] = ep * (r + l_prev);
        out.plus.left[i] = ep * (l + r_next);
        out.minus.right[i] = em * (r - l_prev);
        out.minus.left[i] = em * (l - r_next);
    }
    out.plus.wraparound_risk = out.minus.wraparound_risk = state.wraparound_risk;
    return out;
}

/// e^{2i gamma t} Psi_+ + e^{-2i gamma t} Psi_-.
inline SpinorField chiral_recombine(const ChiralPair& pair, double gamma, double time)
{
    const std::size_t N = pair.plus.size();
    const cplx ep = std::polar(1.0, 2.0 * gamma * time);
    const cplx em = std::polar(1.0, -2.0 * gamma * time);
    SpinorField out(N);
    for (std::size_t i = 0; i < N; ++i) {
        out.right[i] = ep * pair.plus.right[i] + em * pair.minus.right[i];
        out.left[i] = ep * pair.plus.left[i] + em * pair.minus.left[i];
    }
    return out;
}

/// Evolve each chiral component by its own scalar walk: Psi_+ with the
/// ordinary Laplacian sign, Psi_- with the opposite one.
inline ChiralPair chiral_evolve(const ChiralPair& pair, double gamma, double time)
{
    auto evolve_both = [time](const SpinorField& f, const std::function<double(double)>& energy) {
        ScalarField r(f.size());
        ScalarField l(f.size());
        r.amp = f.right;
        l.amp = f.left;
        SpinorField out(f.size());
        out.right = evolve_spectral(r, energy, time).amp;
        out.left = evolve_spectral(l, energy, time).amp;
        out.wraparound_risk = f.wraparound_risk;
        return out;
    };
    return {evolve_both(pair.plus, [gamma](double k) { return ctqw_energy(k, gamma); }),
            evolve_both(pair.minus, [gamma](double k) { return -ctqw_energy(k, gamma); })};
}

// Fourth-order Runge-Kutta integration of the same equations. Only used to
// cross-check the spectral paths; the step count is the caller's choice.

inline ScalarField ctqw_integrate_rk4(const ScalarField& state, const CtqwParams& params, std::size_t n_steps)
{
    detail::check_ctqw_params(params, state.size(), "ctqw_integrate_rk4");
    const std::size_t N = state.size();
    const double g = params.gamma;
    auto rhs = [N, g](const std::vector<cplx>& psi) {
        std::vector<cplx> d(N);
        for (std::size_t i = 0; i < N; ++i) {
            const cplx lap = psi[(i + 1) % N] - 2.0 * psi[i] + psi[(i + N - 1) % N];
            d[i] = cplx(0.0, 1.0) * g * lap; // -i * (-gamma lap)
        }
        return d;
    };
    const double h = n_steps == 0 ? 0.0 : params.time / static_cast<double>(n_steps);
    std::vector<cplx> y = state.amp;
    std::vector<cplx> tmp(N);
    for (std::size_t s = 0; s < n_steps; ++s) {
        const auto k1 = rhs(y);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        const auto k2 = rhs(tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        const auto k3 = rhs(tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
        const auto k4 = rhs(tmp);
        for (std::size_t i = 0; i < N; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    ScalarField out(N);
    out.amp = std::move(y);
    return out;
}

inline SpinorField limit_pair_integrate_rk4(const SpinorField& state, const CtqwParams& params,
                                            std::size_t n_steps)
{
    detail::check_ctqw_params(params, state.size(), "limit_pair_integrate_rk4");
    const std::size_t N = state.size();
    const double g = params.gamma;
    using Pair = std::pair<std::vector<cplx>, std::vector<cplx>>;
    auto rhs = [N, g](const Pair& y) {
        Pair d{std::vector<cplx>(N), std::vector<cplx>(N)};
        const cplx ig(0.0, g);
        for (std::size_t i = 0; i < N; ++i) {
            d.first[i] = ig * (y.second[i] + y.second[(i + N - 2) % N]);
            d.second[i] = ig * (y.first[i] + y.first[(i + 2) % N]);
        }
        return d;
    };
    auto axpy = [N](const Pair& y, double a, const Pair& k) {
        Pair out = y;
        for (std::size_t i = 0; i < N; ++i) {
            out.first[i] += a * k.first[i];
            out.second[i] += a * k.second[i];
        }
        return out;
    };
    const double h = n_steps == 0 ? 0.0 : params.time / static_cast<double>(n_steps);
    Pair y{state.right, state.left};
    for (std::size_t s = 0; s < n_steps; ++s) {
        const Pair k1 = rhs(y);
        const Pair k2 = rhs(axpy(y, 0.5 * h, k1));
        const Pair k3 = rhs(axpy(y, 0.5 * h, k2));
        const Pair k4 = rhs(axpy(y, h, k3));
        for (std::size_t i = 0; i < N; ++i) {
            y.first[i] += h / 6.0 * (k1.first[i] + 2.0 * k2.first[i] + 2.0 * k3.first[i] + k4.first[i]);
            y.second[i] += h / 6.0 * (k1.second[i] + 2.0 * k2.second[i] + 2.0 * k3.second[i] + k4.second[i]);
        }
    }
    SpinorField out(N);
    out.right = std::move(y.first);
    out.left = std::move(y.second);
    return out;
}

} // namespace qwalk

#endif
