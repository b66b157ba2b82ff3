// Persistent random walk, its alpha -> 0 continuous-time limit, and lattice
// diffusion. Probability vectors are propagated deterministically.

#ifndef QWALK_CLASSICAL_HPP
#define QWALK_CLASSICAL_HPP

#include "bessel.hpp"
#include "lattice.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qwalk
{

struct PersistentParams
{
    double alpha = 0.5;
    std::size_t n_sites = 256;

    [[nodiscard]] double beta() const noexcept { return 1.0 - alpha; }
};

namespace detail
{

inline void check_alpha(double alpha, const char* who)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error(std::string(who) + ": alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
}

} // namespace detail

/// p_R(n) <- alpha p_R(n-1) + beta p_L(n-1), p_L(n) <- alpha p_L(n+1) + beta p_R(n+1).
inline ChiralProbabilityField persistent_step(const ChiralProbabilityField& p, double alpha)
{
    detail::check_alpha(alpha, "persistent_step");
    const std::size_t N = p.size();
    ChiralProbabilityField out(N);
    // lerp(b, a, alpha) = alpha a + (1 - alpha) b without rounding 1 - alpha,
    // which would bias the total by one ulp per step
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t from_left = (i + N - 1) % N;
        const std::size_t from_right = (i + 1) % N;
        out.right[i] = std::lerp(p.left[from_left], p.right[from_left], alpha);
        out.left[i] = std::lerp(p.right[from_right], p.left[from_right], alpha);
    }
    return out;
}

inline ChiralProbabilityField persistent_evolve(ChiralProbabilityField p, double alpha, std::size_t steps)
{
    for (std::size_t s = 0; s < steps; ++s) {
        p = persistent_step(p, alpha);
    }
    return p;
}

/// The two-step iterate written out directly:
///   p_R(n) <- a^2 p_R(n-2) + a b [p_L(n-2) + p_L(n)] + b^2 p_R(n)
///   p_L(n) <- a^2 p_L(n+2) + a b [p_R(n+2) + p_R(n)] + b^2 p_L(n)
inline ChiralProbabilityField persistent_two_step(const ChiralProbabilityField& p, double alpha)
{
    detail::check_alpha(alpha, "persistent_two_step");
    const double beta = 1.0 - alpha;
    const std::size_t N = p.size();
    ChiralProbabilityField out(N);
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t m2 = (i + 2 * N - 2) % N;
        const std::size_t p2 = (i + 2) % N;
        out.right[i] = alpha * alpha * p.right[m2] + alpha * beta * (p.left[m2] + p.left[i]) + beta * beta * p.right[i];
        out.left[i] = alpha * alpha * p.left[p2] + alpha * beta * (p.right[p2] + p.right[i]) + beta * beta * p.left[i];
    }
    return out;
}

/// L1 gap between two persistent steps and the direct two-step formula.
inline double persistent_two_step_check(const ChiralProbabilityField& p, double alpha)
{
    return l1_distance(persistent_step(persistent_step(p, alpha), alpha), persistent_two_step(p, alpha));
}

/// Exact solution of
///   d/dt p_R(n) = -2 gamma p_R(n) + gamma [p_L(n-2) + p_L(n)]
///   d/dt p_L(n) = -2 gamma p_L(n) + gamma [p_R(n+2) + p_R(n)].
/// Per momentum the generator is -2 gamma I + 2 gamma cos k M(k) with
/// M(k) = [[0, e^{-ik}], [e^{ik}, 0]], M^2 = I.
inline ChiralProbabilityField classical_limit_evolve(const ChiralProbabilityField& p, double gamma, double time)
{
    if (p.size() % 2 != 0) {
        throw std::invalid_argument("classical_limit_evolve: ring size must be even");
    }
    if (!(gamma > 0.0) || !(time >= 0.0)) {
        throw std::invalid_argument("classical_limit_evolve: need gamma > 0 and time >= 0");
    }
    if (time == 0.0) {
        return p;
    }
    const std::size_t N = p.size();
    SpinorField amp(N);
    for (std::size_t i = 0; i < N; ++i) {
        amp.right[i] = p.right[i];
        amp.left[i] = p.left[i];
    }
    SpinorSpectrum ft = dft_ring(amp);
    const double gt = 2.0 * gamma * time;
    for (std::size_t m = 0; m < N; ++m) {
        const double k = ft.grid[m];
        const double c = std::cos(k);
        // e^{-gt} cosh(gt c) and e^{-gt} sinh(gt c) without overflow
        const double up = std::exp(-gt * (1.0 - c));
        const double down = std::exp(-gt * (1.0 + c));
        const double ch = 0.5 * (up + down);
        const double sh = 0.5 * (up - down);
        const cplx r = ft.right[m];
        const cplx l = ft.left[m];
        ft.right[m] = ch * r + sh * std::polar(1.0, -k) * l;
        ft.left[m] = ch * l + sh * std::polar(1.0, k) * r;
    }
    const SpinorField back = idft_ring(ft);
    ChiralProbabilityField out(N);
    for (std::size_t i = 0; i < N; ++i) {
        out.right[i] = clamp_probability(back.right[i].real());
        out.left[i] = clamp_probability(back.left[i].real());
    }
    return out;
}

/// p(n) = p_R(n) + p_L(n-1).
inline ProbabilityField combined_density(const ChiralProbabilityField& p)
{
    const std::size_t N = p.size();
    ProbabilityField out(N);
    for (std::size_t i = 0; i < N; ++i) {
        out.p[i] = p.right[i] + p.left[(i + N - 1) % N];
    }
    return out;
}

/// Exact solution of d/dt p(n) = gamma [p(n+1) - 2 p(n) + p(n-1)].
inline ProbabilityField diffusion_evolve(const ProbabilityField& p, double gamma, double time)
{
    if (!(gamma > 0.0) || !(time >= 0.0)) {
        throw std::invalid_argument("diffusion_evolve: need gamma > 0 and time >= 0");
    }
    if (time == 0.0) {
        return p;
    }
    ScalarField amp(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        amp.amp[i] = p.p[i];
    }
    ScalarSpectrum ft = dft_ring(amp);
    for (std::size_t m = 0; m < ft.grid.size(); ++m) {
        ft.amp[m] *= std::exp(-2.0 * gamma * time * (1.0 - std::cos(ft.grid[m])));
    }
    const ScalarField back = idft_ring(ft);
    ProbabilityField out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.p[i] = clamp_probability(back.amp[i].real());
    }
    return out;
}

/// e^{-2 gamma t} I_n(2 gamma t): lattice diffusion from delta_{n,0} on the infinite line.
inline double diffusion_analytic(std::int64_t n, double gamma, double time)
{
    return bessel_i_scaled(n, 2.0 * gamma * time);
}

/// L1 gap between the combined density of the limit evolution and direct
/// lattice diffusion of the initial combined density.
inline double combined_density_diffusion_check(const ChiralProbabilityField& p, double gamma, double time)
{
    return l1_distance(combined_density(classical_limit_evolve(p, gamma, time)),
                       diffusion_evolve(combined_density(p), gamma, time));
}

} // namespace qwalk

#endif
