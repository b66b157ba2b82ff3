// Field types on a periodic ring, the unitary ring DFT, densities and
// distances shared by every walk engine.
//
// Sites are stored at indices i = 0..N-1. Index N/2 is the lattice origin,
// so site n lives at index (n + N/2) mod N.

#ifndef QWALK_LATTICE_HPP
#define QWALK_LATTICE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx imag_unit{0.0, 1.0};

// Entries of a probability field may dip below zero by roundoff only.
inline constexpr double negative_probability_floor = -1e-14;

/// Cyclic site bookkeeping for an N-site ring centered on index N/2.
class Ring
{
public:
    Ring() = default;
    explicit Ring(std::size_t n_sites) : n_(n_sites)
    {
        if (n_sites == 0) {
            throw std::invalid_argument("ring needs at least one site");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::int64_t center() const noexcept { return static_cast<std::int64_t>(n_ / 2); }

    /// Storage index of lattice site n (any integer, wrapped cyclically).
    [[nodiscard]] std::size_t index(std::int64_t n) const noexcept
    {
        const auto N = static_cast<std::int64_t>(n_);
        return static_cast<std::size_t>((((n + center()) % N) + N) % N);
    }

    /// Lattice coordinate of storage index i, in [-N/2, N - N/2).
    [[nodiscard]] std::int64_t site(std::size_t i) const noexcept
    {
        return static_cast<std::int64_t>(i) - center();
    }

private:
    std::size_t n_ = 1;
};

/// Two-chirality amplitudes (psi_R, psi_L) per site. N must be even.
struct SpinorField
{
    Ring ring;
    std::vector<cplx> right;
    std::vector<cplx> left;
    bool wraparound_risk = false;

    SpinorField() = default;
    explicit SpinorField(std::size_t n_sites)
        : ring(n_sites), right(n_sites), left(n_sites)
    {
        if (n_sites % 2 != 0) {
            throw std::invalid_argument("spinor field needs an even number of sites, got "
                                        + std::to_string(n_sites));
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return right.size(); }
    cplx& r(std::int64_t n) { return right[ring.index(n)]; }
    cplx& l(std::int64_t n) { return left[ring.index(n)]; }
    [[nodiscard]] cplx r(std::int64_t n) const { return right[ring.index(n)]; }
    [[nodiscard]] cplx l(std::int64_t n) const { return left[ring.index(n)]; }
};

/// One complex amplitude per site.
struct ScalarField
{
    Ring ring;
    std::vector<cplx> amp;
    bool wraparound_risk = false;

    ScalarField() = default;
    explicit ScalarField(std::size_t n_sites) : ring(n_sites), amp(n_sites) {}

    [[nodiscard]] std::size_t size() const noexcept { return amp.size(); }
    cplx& operator()(std::int64_t n) { return amp[ring.index(n)]; }
    [[nodiscard]] cplx operator()(std::int64_t n) const { return amp[ring.index(n)]; }
};

/// Nonnegative weight per site.
struct ProbabilityField
{
    Ring ring;
    std::vector<double> p;
    bool wraparound_risk = false;

    ProbabilityField() = default;
    explicit ProbabilityField(std::size_t n_sites) : ring(n_sites), p(n_sites) {}

    [[nodiscard]] std::size_t size() const noexcept { return p.size(); }
    double& operator()(std::int64_t n) { return p[ring.index(n)]; }
    [[nodiscard]] double operator()(std::int64_t n) const { return p[ring.index(n)]; }
};

/// Weights (p_R, p_L) per site for the persistent walk. N must be even.
struct ChiralProbabilityField
{
    Ring ring;
    std::vector<double> right;
    std::vector<double> left;

    ChiralProbabilityField() = default;
    explicit ChiralProbabilityField(std::size_t n_sites)
        : ring(n_sites), right(n_sites), left(n_sites)
    {
        if (n_sites % 2 != 0) {
            throw std::invalid_argument("chiral probability field needs an even number of sites");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return right.size(); }
    double& r(std::int64_t n) { return right[ring.index(n)]; }
    double& l(std::int64_t n) { return left[ring.index(n)]; }
    [[nodiscard]] double r(std::int64_t n) const { return right[ring.index(n)]; }
    [[nodiscard]] double l(std::int64_t n) const { return left[ring.index(n)]; }
};

/// Dual grid k_m = 2 pi m / N - pi, m = 0..N-1.
class MomentumGrid
{
public:
    MomentumGrid() = default;
    explicit MomentumGrid(std::size_t n) : n_(n)
    {
        if (n == 0) {
            throw std::invalid_argument("momentum grid needs at least one point");
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator[](std::size_t m) const noexcept
    {
        return 2.0 * pi * static_cast<double>(m) / static_cast<double>(n_) - pi;
    }
    [[nodiscard]] double spacing() const noexcept { return 2.0 * pi / static_cast<double>(n_); }

private:
    std::size_t n_ = 1;
};

struct ScalarSpectrum
{
    MomentumGrid grid;
    std::vector<cplx> amp;
};

struct SpinorSpectrum
{
    MomentumGrid grid;
    std::vector<cplx> right;
    std::vector<cplx> left;
};

namespace detail
{

// phi(k_m) = N^{-1/2} sum_n psi(n) exp(sign * i k_m n), with n = i - N/2.
// exp(-i k_m n) = (-1)^n exp(-2 pi i m n / N); the root table keeps the
// phases exact to one rounding regardless of m*n.
inline std::vector<cplx> ring_transform(std::span<const cplx> in, int sign)
{
    const std::size_t N = in.size();
    const auto NN = static_cast<std::int64_t>(N);
    const Ring ring(N);
    std::vector<cplx> roots(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double a = 2.0 * pi * static_cast<double>(j) / static_cast<double>(N);
        roots[j] = {std::cos(a), sign * std::sin(a)};
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    std::vector<cplx> out(N);
    for (std::size_t m = 0; m < N; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < N; ++i) {
            const std::int64_t n = ring.site(i);
            const auto j = static_cast<std::size_t>(((static_cast<std::int64_t>(m) * n) % NN + NN) % NN);
            const double parity = (n % 2 == 0) ? 1.0 : -1.0;
            acc += in[i] * roots[j] * parity;
        }
        out[m] = acc * scale;
    }
    return out;
}

inline bool all_finite(std::span<const cplx> v)
{
    for (const auto& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

inline void require_finite(std::span<const cplx> v, const char* what)
{
    if (!all_finite(v)) {
        throw std::domain_error(std::string(what) + ": field contains non-finite amplitudes");
    }
}

} // namespace detail

inline ScalarSpectrum dft_ring(const ScalarField& f)
{
    detail::require_finite(f.amp, "dft_ring");
    return {MomentumGrid(f.size()), detail::ring_transform(f.amp, -1)};
}

inline SpinorSpectrum dft_ring(const SpinorField& f)
{
    detail::require_finite(f.right, "dft_ring");
    detail::require_finite(f.left, "dft_ring");
    return {MomentumGrid(f.size()), detail::ring_transform(f.right, -1),
            detail::ring_transform(f.left, -1)};
}

inline ScalarField idft_ring(const ScalarSpectrum& s)
{
    ScalarField f(s.amp.size());
    f.amp = detail::ring_transform(s.amp, +1);
    return f;
}

inline SpinorField idft_ring(const SpinorSpectrum& s)
{
    SpinorField f(s.right.size());
    f.right = detail::ring_transform(s.right, +1);
    f.left = detail::ring_transform(s.left, +1);
    return f;
}

inline double norm2(const ScalarField& f)
{
    double s = 0.0;
    for (const auto& z : f.amp) {
        s += std::norm(z);
    }
    return s;
}

inline double norm2(const SpinorField& f)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        s += std::norm(f.right[i]) + std::norm(f.left[i]);
    }
    return s;
}

inline double total(const ProbabilityField& p)
{
    double s = 0.0;
    for (double v : p.p) {
        s += v;
    }
    return s;
}

inline double total(const ChiralProbabilityField& p)
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += p.right[i] + p.left[i];
    }
    return s;
}

/// 2-norm of a - b, summed over both chiralities.
inline double distance(const SpinorField& a, const SpinorField& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("distance: size mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::norm(a.right[i] - b.right[i]) + std::norm(a.left[i] - b.left[i]);
    }
    return std::sqrt(s);
}

inline double distance(const ScalarField& a, const ScalarField& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("distance: size mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::norm(a.amp[i] - b.amp[i]);
    }
    return std::sqrt(s);
}

inline ProbabilityField density(const SpinorField& f)
{
    ProbabilityField rho(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        rho.p[i] = std::norm(f.right[i]) + std::norm(f.left[i]);
    }
    rho.wraparound_risk = f.wraparound_risk;
    return rho;
}

inline ProbabilityField density(const ScalarField& f)
{
    ProbabilityField rho(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        rho.p[i] = std::norm(f.amp[i]);
    }
    rho.wraparound_risk = f.wraparound_risk;
    return rho;
}

inline double l1_distance(const ProbabilityField& p, const ProbabilityField& q)
{
    if (p.size() != q.size()) {
        throw std::invalid_argument("l1_distance: size mismatch (" + std::to_string(p.size())
                                    + " vs " + std::to_string(q.size()) + ")");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::abs(p.p[i] - q.p[i]);
    }
    return s;
}

inline double l1_distance(const ChiralProbabilityField& p, const ChiralProbabilityField& q)
{
    if (p.size() != q.size()) {
        throw std::invalid_argument("l1_distance: size mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::abs(p.right[i] - q.right[i]) + std::abs(p.left[i] - q.left[i]);
    }
    return s;
}

/// Roundoff negatives above the floor become exactly zero.
inline double clamp_probability(double v) noexcept
{
    return (v < 0.0 && v >= negative_probability_floor) ? 0.0 : v;
}

/// Minimum ring size for a run that spreads at `speed` sites per unit time.
inline std::size_t required_sites(double speed, double duration)
{
    return 2 * static_cast<std::size_t>(std::ceil(std::abs(speed) * duration)) + 80;
}

inline bool window_ok(std::size_t n_sites, double speed, double duration)
{
    return n_sites >= required_sites(speed, duration);
}

inline ScalarField delta_scalar(std::size_t n_sites, std::int64_t at = 0)
{
    ScalarField f(n_sites);
    f(at) = 1.0;
    return f;
}

} // namespace qwalk

#endif
