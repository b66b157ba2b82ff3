// The theta -> pi/2 continuous-time limit of the coined walk.
//
// With theta = pi/2 - delta, two coined steps combine to
//   U^2 = -exp[i 2 delta cos k (sigma_x cos k + sigma_y sin k)] + O(delta^2),
// so tau steps with tau * delta = 2 gamma t approach
//   exp(-i tau pi/2) exp(-i H t),  H = -2 gamma cos k (sigma_x cos k + sigma_y sin k).
// This header measures each piece of that statement and also builds the
// coinless even/odd splitting of the lattice Laplacian.

#ifndef QWALK_LIMIT_HPP
#define QWALK_LIMIT_HPP

#include "ctqw.hpp"
#include "dtqw.hpp"
#include "fit.hpp"
#include "lattice.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk
{

namespace detail
{

// sigma_x cos k + sigma_y sin k
inline Matrix2c rotated_flip(double k)
{
    Matrix2c m;
    m << 0, std::polar(1.0, -k), std::polar(1.0, k), 0;
    return m;
}

// (-i)^tau, exact
inline cplx minus_i_power(std::size_t tau)
{
    static constexpr cplx table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return table[tau % 4];
}

} // namespace detail

/// Frobenius norm of U(k, pi/2 - delta)^2 + exp[i 2 delta cos k (sigma_x cos k + sigma_y sin k)].
inline double bch_residual(double k, double delta)
{
    if (!(delta >= 0.0) || delta > 0.5) {
        throw std::domain_error("bch_residual: delta must lie in [0, 0.5], got " + std::to_string(delta));
    }
    const Matrix2c u = momentum_propagator(k, pi / 2 - delta).u;
    const double a = 2.0 * delta * std::cos(k);
    const Matrix2c first_order = std::cos(a) * Matrix2c::Identity() + cplx(0.0, std::sin(a)) * detail::rotated_flip(k);
    return (u * u + first_order).norm();
}

/// H(k) = -2 gamma cos k (sigma_x cos k + sigma_y sin k).
inline MomentumOperator2 limit_hamiltonian(double k, double gamma)
{
    return {k, -2.0 * gamma * std::cos(k) * detail::rotated_flip(k)};
}

/// exp(-i tau pi / 2) exp(-i H(k) t); tau must be even.
inline MomentumOperator2 limit_propagator(double k, double gamma, double time, std::size_t tau)
{
    if (tau % 2 != 0) {
        throw std::invalid_argument("limit_propagator: tau must be even, got " + std::to_string(tau));
    }
    const Matrix2c h = limit_hamiltonian(k, gamma).u;
    // traceless Hermitian: H = |h| n.sigma, exp(-iHt) = cos(|h|t) I - i sin(|h|t) n.sigma
    const double mag = std::sqrt(std::max(0.0, (h * h).trace().real() / 2.0));
    Matrix2c evo = Matrix2c::Identity();
    if (mag > 0.0) {
        evo = std::cos(mag * time) * Matrix2c::Identity() - cplx(0.0, std::sin(mag * time)) * (h / mag);
    }
    return {k, detail::minus_i_power(tau) * evo};
}

struct LimitScanEntry
{
    double delta = 0.0;
    std::size_t tau = 0;
    double state_error = 0.0;
};

struct LimitScanResult
{
    std::vector<LimitScanEntry> entries;
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    bool wraparound_risk = false;
};

/// For each even tau: delta = 2 gamma t / tau, theta = pi/2 - delta, and the
/// 2-norm distance between tau coined steps and exp(-i tau pi/2) times the
/// limit-pair evolution to time t. The slope is fitted over entries with
/// nonzero error.
inline LimitScanResult convergence_scan(double gamma, double time, std::span<const std::size_t> taus,
                                        const SpinorField& initial)
{
    if (taus.empty()) {
        throw std::invalid_argument("convergence_scan: empty tau list");
    }
    for (std::size_t tau : taus) {
        if (tau == 0 || tau % 2 != 0) {
            throw std::invalid_argument("convergence_scan: every tau must be even and positive, got "
                                        + std::to_string(tau));
        }
    }
    const double span = 2.0 * gamma * time;
    const CtqwParams cp{gamma, time, initial.size()};
    const SpinorField target = limit_pair_evolve(initial, cp);

    LimitScanResult result;
    result.wraparound_risk = target.wraparound_risk;
    std::vector<double> deltas;
    std::vector<double> errors;
    for (std::size_t tau : taus) {
        const double delta = span / static_cast<double>(tau);
        if (std::abs(delta * static_cast<double>(tau) - span) > 1e-12 * std::max(1.0, span)) {
            throw std::logic_error("convergence_scan: tau * delta drifted from 2 gamma t");
        }
        if (delta > pi / 2) {
            throw std::invalid_argument("convergence_scan: tau too small for 2 gamma t (delta > pi/2)");
        }
        const DtqwParams dp{pi / 2 - delta, initial.size(), tau};
        const SpinorField walked = dtqw_evolve(initial, dp);
        const cplx phase = detail::minus_i_power(tau);
        double err2 = 0.0;
        for (std::size_t i = 0; i < walked.size(); ++i) {
            err2 += std::norm(walked.right[i] - phase * target.right[i])
                    + std::norm(walked.left[i] - phase * target.left[i]);
        }
        const double err = std::sqrt(err2);
        result.entries.push_back({delta, tau, err});
        result.wraparound_risk = result.wraparound_risk || walked.wraparound_risk;
        if (err > 0.0 && delta > 0.0) {
            deltas.push_back(delta);
            errors.push_back(err);
        }
    }
    if (deltas.size() >= 2) {
        result.fitted_slope = loglog_slope(deltas, errors);
    }
    return result;
}

/// Real symmetric operator on an N-site ring (dense; N is small here).
struct LatticeHamiltonian
{
    std::size_t n_sites = 0;
    Eigen::MatrixXd h;
};

namespace detail
{

inline void require_even_ring(std::size_t n, const char* who)
{
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument(std::string(who) + ": ring size must be even and >= 2, got "
                                    + std::to_string(n));
    }
}

} // namespace detail

/// H_{n,m} = 2 delta_{n,m} - delta_{n+1,m} - delta_{n-1,m} on the ring.
inline LatticeHamiltonian laplacian_hamiltonian(std::size_t n_sites)
{
    LatticeHamiltonian out{n_sites, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_sites),
                                                          static_cast<Eigen::Index>(n_sites))};
    const auto N = static_cast<Eigen::Index>(n_sites);
    for (Eigen::Index n = 0; n < N; ++n) {
        out.h(n, n) += 2.0;
        out.h(n, (n + 1) % N) -= 1.0;
        out.h(n, (n + N - 1) % N) -= 1.0;
    }
    return out;
}

struct EvenOddSplit
{
    LatticeHamiltonian even;
    LatticeHamiltonian odd;
};

/// H^even_{n,m} = delta_{n,m} - (1+(-1)^n)/2 delta_{n+1,m} - (1-(-1)^n)/2 delta_{n-1,m},
/// H^odd with the parities exchanged. Site parity is that of the storage index.
inline EvenOddSplit even_odd_split(std::size_t n_sites)
{
    detail::require_even_ring(n_sites, "even_odd_split");
    const auto N = static_cast<Eigen::Index>(n_sites);
    EvenOddSplit out{{n_sites, Eigen::MatrixXd::Zero(N, N)}, {n_sites, Eigen::MatrixXd::Zero(N, N)}};
    for (Eigen::Index n = 0; n < N; ++n) {
        const int sign = (n % 2 == 0) ? 1 : -1;
        const double up_even = 0.5 * (1 + sign);
        const double down_even = 0.5 * (1 - sign);
        const Eigen::Index up = (n + 1) % N;
        const Eigen::Index down = (n + N - 1) % N;
        out.even.h(n, n) += 1.0;
        out.even.h(n, up) -= up_even;
        out.even.h(n, down) -= down_even;
        out.odd.h(n, n) += 1.0;
        out.odd.h(n, up) -= down_even;
        out.odd.h(n, down) -= up_even;
    }
    return out;
}

/// exp(i angle H) for H made of disjoint symmetric 2x2 blocks
/// [[d, o], [o, d]]: each block gives e^{i angle d}(cos(angle o) I + i sin(angle o) sigma_x).
inline Eigen::MatrixXcd block_exponential(const LatticeHamiltonian& ham, double angle)
{
    const auto N = static_cast<Eigen::Index>(ham.n_sites);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
    std::vector<bool> done(ham.n_sites, false);
    for (Eigen::Index a = 0; a < N; ++a) {
        if (done[static_cast<std::size_t>(a)]) {
            continue;
        }
        Eigen::Index partner = -1;
        for (Eigen::Index b = 0; b < N; ++b) {
            if (b != a && ham.h(a, b) != 0.0) {
                if (partner >= 0) {
                    throw std::invalid_argument("block_exponential: operator is not 2x2 block diagonal");
                }
                partner = b;
            }
        }
        if (partner < 0) {
            out(a, a) = std::polar(1.0, angle * ham.h(a, a));
            done[static_cast<std::size_t>(a)] = true;
            continue;
        }
        const double d = ham.h(a, a);
        const double o = ham.h(a, partner);
        if (ham.h(partner, partner) != d || ham.h(partner, a) != o) {
            throw std::invalid_argument("block_exponential: block is not of the form [[d, o], [o, d]]");
        }
        const cplx phase = std::polar(1.0, angle * d);
        out(a, a) = out(partner, partner) = phase * std::cos(angle * o);
        out(a, partner) = out(partner, a) = phase * cplx(0.0, std::sin(angle * o));
        done[static_cast<std::size_t>(a)] = done[static_cast<std::size_t>(partner)] = true;
    }
    return out;
}

/// U(theta1, theta2) = exp(i theta2 H^odd) exp(i theta1 H^even).
inline Eigen::MatrixXcd coinless_propagator(double theta1, double theta2, std::size_t n_sites)
{
    detail::require_even_ring(n_sites, "coinless_propagator");
    const EvenOddSplit split = even_odd_split(n_sites);
    return block_exponential(split.odd, theta2) * block_exponential(split.even, theta1);
}

namespace detail
{

// Smallest over global rotations and cyclic pairings of the largest chordal
// distance |a_i - e^{i phi} b_j| between two equal-size point sets on the unit
// circle. Candidate rotations send b_0 onto each a_j, so an exact match up
// to a global phase is always found.
inline double circle_matching_distance(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("circle_matching_distance: sets must be nonempty and of equal size");
    }
    const std::size_t n = a.size();
    auto sorted_phases = [](const std::vector<cplx>& v, double rot) {
        std::vector<double> ph(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double p = std::arg(v[i]) + rot;
            p = std::fmod(p, 2.0 * pi);
            if (p < 0.0) {
                p += 2.0 * pi;
            }
            ph[i] = p;
        }
        std::sort(ph.begin(), ph.end());
        return ph;
    };
    const std::vector<double> pa = sorted_phases(a, 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double rot = std::arg(a[j]) - std::arg(b[0]);
        const std::vector<double> pb = sorted_phases(b, rot);
        for (std::size_t shift = 0; shift < n; ++shift) {
            double worst = 0.0;
            for (std::size_t i = 0; i < n && worst < best; ++i) {
                worst = std::max(worst, std::abs(std::polar(1.0, pa[i]) - std::polar(1.0, pb[(i + shift) % n])));
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

} // namespace detail

/// Eigenvalues of U(theta1, theta2) on an N-site ring.
inline std::vector<cplx> coinless_spectrum(double theta1, double theta2, std::size_t n_sites)
{
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(coinless_propagator(theta1, theta2, n_sites), false);
    std::vector<cplx> out(n_sites);
    for (std::size_t i = 0; i < n_sites; ++i) {
        out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    }
    return out;
}

/// Eigenvalues of U(k, theta) over the n_cells-point dual grid, two per k.
inline std::vector<cplx> dtqw_spectrum(double theta, std::size_t n_cells)
{
    const MomentumGrid grid(n_cells);
    std::vector<cplx> out;
    out.reserve(2 * n_cells);
    for (std::size_t m = 0; m < n_cells; ++m) {
        const Eigen::ComplexEigenSolver<Matrix2c> es(momentum_propagator(grid[m], theta).u, false);
        out.push_back(es.eigenvalues()(0));
        out.push_back(es.eigenvalues()(1));
    }
    return out;
}

/// Spectral distance between the coinless operator U(theta - pi/2, pi/2) on
/// N sites and the coined walk on N/2 cells, after removing one global phase.
inline double coinless_spectral_equivalence(double theta, std::size_t n_sites)
{
    detail::require_even_ring(n_sites, "coinless_spectral_equivalence");
    return detail::circle_matching_distance(coinless_spectrum(theta - pi / 2, pi / 2, n_sites),
                                            dtqw_spectrum(theta, n_sites / 2));
}

} // namespace qwalk

#endif
