// Long-time (weak-limit) densities of the two quantum walks and their
// comparison with simulated densities.
//
//   scalar walk:  P(x, t)   = 1 / (pi sqrt((2 gamma t)^2 - x^2)),              |x| < 2 gamma t
//   coined walk:  P(x, tau) = sin(theta) / (pi (1 - x^2/tau^2) sqrt((cos(theta) tau)^2 - x^2)),
//                                                                             |x| < cos(theta) tau
//
// Site n is identified with x = n.

#ifndef QWALK_ASYMPTOTICS_HPP
#define QWALK_ASYMPTOTICS_HPP

#include "lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qwalk
{

enum class WeakLimitKind
{
    ctqw_arcsine,
    dtqw_coined,
};

/// Density value returned exactly on the edge |x| = c t, where both formulas diverge.
inline constexpr double weak_density_boundary = std::numeric_limits<double>::infinity();

inline double ctqw_weak_density(double x, double gamma, double time)
{
    if (!(time > 0.0)) {
        throw std::domain_error("ctqw_weak_density: time must be positive");
    }
    const double edge = 2.0 * gamma * time;
    const double ax = std::abs(x);
    if (ax > edge) {
        return 0.0;
    }
    if (ax == edge) {
        return weak_density_boundary;
    }
    return 1.0 / (pi * std::sqrt(edge * edge - x * x));
}

inline double dtqw_weak_density(double x, double theta, double tau)
{
    if (!(tau > 0.0)) {
        throw std::domain_error("dtqw_weak_density: tau must be positive");
    }
    if (!(theta > 0.0 && theta < pi / 2)) {
        throw std::domain_error("dtqw_weak_density: theta must lie in (0, pi/2), got " + std::to_string(theta));
    }
    const double edge = std::cos(theta) * tau;
    const double ax = std::abs(x);
    if (ax > edge) {
        return 0.0;
    }
    if (ax == edge) {
        return weak_density_boundary;
    }
    const double r = x / tau;
    return std::sin(theta) / (pi * (1.0 - r * r) * std::sqrt(edge * edge - x * x));
}

/// One of the two weak-limit laws at a fixed time.
struct WeakLimitDensity
{
    WeakLimitKind kind = WeakLimitKind::ctqw_arcsine;
    double speed = 0.25;      ///< c: 2 gamma or cos(theta)
    double time = 1.0;        ///< t or tau
    double theta = pi / 2;    ///< used by the coined law only

    static WeakLimitDensity ctqw(double gamma, double time)
    {
        return {WeakLimitKind::ctqw_arcsine, 2.0 * gamma, time, pi / 2};
    }
    static WeakLimitDensity dtqw(double theta, double tau)
    {
        return {WeakLimitKind::dtqw_coined, std::cos(theta), tau, theta};
    }

    [[nodiscard]] double edge() const noexcept { return speed * time; }

    [[nodiscard]] double operator()(double x) const
    {
        return kind == WeakLimitKind::ctqw_arcsine ? ctqw_weak_density(x, speed / 2.0, time)
                                                   : dtqw_weak_density(x, theta, time);
    }

    /// Probability mass on [a, b]. With x = L sin u the integrand in u is
    /// smooth (constant 1/pi for the arcsine law), so a fixed Gauss-Legendre
    /// rule per panel is exact to roundoff.
    [[nodiscard]] double mass(double a, double b) const
    {
        const double L = edge();
        if (!(L > 0.0)) {
            throw std::domain_error("WeakLimitDensity::mass: support is empty");
        }
        const double ua = std::asin(std::clamp(a / L, -1.0, 1.0));
        const double ub = std::asin(std::clamp(b / L, -1.0, 1.0));
        if (kind == WeakLimitKind::ctqw_arcsine) {
            return (ub - ua) / pi;
        }
        const double s = std::sin(theta);
        const double c2 = speed * speed;
        auto integrand = [s, c2](double u) {
            const double su = std::sin(u);
            return s / (pi * (1.0 - c2 * su * su));
        };
        static constexpr std::array<double, 8> nodes = {
            -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
        static constexpr std::array<double, 8> weights = {
            0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
        const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(ub - ua) / 0.05)));
        const double h = (ub - ua) / panels;
        double total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = ua + (p + 0.5) * h;
            for (std::size_t q = 0; q < nodes.size(); ++q) {
                total += weights[q] * integrand(mid + 0.5 * h * nodes[q]);
            }
        }
        return total * 0.5 * h;
    }

    [[nodiscard]] double total_mass() const { return mass(-edge(), edge()); }
};

struct DensityComparison
{
    double distance = 0.0;        ///< binned L1 over the interior
    double excluded_mass = 0.0;   ///< analytic mass outside the interior window
    std::size_t bins = 0;
};

inline constexpr double default_interior_fraction = 0.9;
inline constexpr std::size_t default_weak_limit_bins = 40;

/// L1 distance between simulated and analytic masses over bins of equal
/// width covering the interior |x| <= fraction * c t. Bin edges sit on
/// half-integers so every site falls in exactly one bin; the weak limit is a
/// statement about such coarse-grained masses, not about single sites.
inline DensityComparison empirical_density_compare(const ProbabilityField& simulated, const WeakLimitDensity& law,
                                                   double interior_fraction = default_interior_fraction,
                                                   std::size_t n_bins = default_weak_limit_bins)
{
    if (!(interior_fraction > 0.0 && interior_fraction < 1.0)) {
        throw std::domain_error("empirical_density_compare: interior fraction must lie in (0, 1)");
    }
    if (n_bins == 0) {
        throw std::invalid_argument("empirical_density_compare: need at least one bin");
    }
    const auto reach = static_cast<std::int64_t>(std::floor(interior_fraction * law.edge()));
    const std::int64_t sites = 2 * reach + 1;
    if (2 * reach + 1 > static_cast<std::int64_t>(simulated.size())) {
        throw std::invalid_argument("empirical_density_compare: interior window exceeds the ring");
    }
    const std::size_t bins = std::min<std::size_t>(n_bins, static_cast<std::size_t>(sites));
    DensityComparison out;
    out.bins = bins;
    double inside = 0.0;
    for (std::size_t j = 0; j < bins; ++j) {
        const std::int64_t first = -reach + static_cast<std::int64_t>(j) * sites / static_cast<std::int64_t>(bins);
        const std::int64_t last = -reach + static_cast<std::int64_t>(j + 1) * sites / static_cast<std::int64_t>(bins) - 1;
        double sim = 0.0;
        for (std::int64_t n = first; n <= last; ++n) {
            sim += simulated(n);
        }
        const double exact = law.mass(static_cast<double>(first) - 0.5, static_cast<double>(last) + 0.5);
        inside += exact;
        out.distance += std::abs(sim - exact);
    }
    out.excluded_mass = std::max(0.0, law.total_mass() - inside);
    return out;
}

/// Average of two consecutive-step densities; removes the sublattice
/// oscillation of the coined walk.
inline ProbabilityField parity_smoothed(const ProbabilityField& a, const ProbabilityField& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("parity_smoothed: size mismatch");
    }
    ProbabilityField out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.p[i] = 0.5 * (a.p[i] + b.p[i]);
    }
    out.wraparound_risk = a.wraparound_risk || b.wraparound_risk;
    return out;
}

inline double mean_position(const ProbabilityField& p)
{
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += static_cast<double>(p.ring.site(i)) * p.p[i];
    }
    return s;
}

inline double position_variance(const ProbabilityField& p)
{
    const double mu = mean_position(p);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = static_cast<double>(p.ring.site(i)) - mu;
        s += d * d * p.p[i];
    }
    return s;
}

} // namespace qwalk

#endif
