// Integer-order Bessel functions J_n(x) and I_n(x) by Miller's backward
// recurrence.

#ifndef QWALK_BESSEL_HPP
#define QWALK_BESSEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk
{

inline constexpr std::int64_t bessel_max_order = 1'000'000;
inline constexpr double bessel_max_argument = 1e6;

namespace detail
{

inline void check_bessel_domain(std::int64_t n, double x, const char* who)
{
    if (std::llabs(n) > bessel_max_order || !(x >= 0.0) || !(x <= bessel_max_argument)) {
        throw std::domain_error(std::string(who) + ": argument out of range (n="
                                + std::to_string(n) + ", x=" + std::to_string(x) + ")");
    }
}

// n_top + 20 + ceil(1.2 x) with n_top = max(n_max, ceil(x)): the normalization
// sum needs the recurrence to start well past x even when only low orders
// are wanted.
inline std::int64_t miller_start(std::int64_t n_max, double x)
{
    const auto n_top = std::max(n_max, static_cast<std::int64_t>(std::ceil(x)));
    auto m = n_top + 20 + static_cast<std::int64_t>(std::ceil(1.2 * x));
    return m + (m % 2);
}

// Below this argument the leading power-series terms are exact to double
// precision and the recurrence coefficients 2k/x would overflow.
inline constexpr double series_threshold = 1e-6;

// sum_m (+-1)^m (x/2)^(2m+n) / (m! (m+n)!), alternating for J, positive for I.
inline double small_argument_series(std::int64_t n, double x, bool alternating)
{
    const double half = 0.5 * x;
    double term = std::exp(static_cast<double>(n) * std::log(half) - std::lgamma(static_cast<double>(n) + 1.0));
    double sum = term;
    for (int m = 1; m < 8; ++m) {
        term *= half * half / (static_cast<double>(m) * static_cast<double>(m + n));
        sum += alternating && (m % 2 == 1) ? -term : term;
    }
    return sum;
}

inline constexpr double rescale_above = 1e200;

// Runs a three-term recurrence downward from miller_start(n_max, x) with
// f_{start+1} = 0, keeping f_0..f_{n_max} and dividing by
// f_0 + sum_{k>=1} weight(k) f_k. Each stored value remembers how many
// rescalings happened after it, so the cost stays linear in start.
template <class Recurrence, class Weight>
std::vector<double> miller_backward(std::int64_t n_max, double x, Recurrence next, Weight weight)
{
    const std::int64_t start = miller_start(n_max, x);
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<int> epoch(out.size(), 0);
    int rescales = 0;
    double above = 0.0;
    double current = 1e-300;
    double norm = 0.0;
    for (std::int64_t k = start; k >= 1; --k) {
        norm += weight(k) * current;
        if (k <= n_max) {
            out[static_cast<std::size_t>(k)] = current;
            epoch[static_cast<std::size_t>(k)] = rescales;
        }
        const double below = next(static_cast<double>(k), x, current, above);
        above = current;
        current = below;
        if (std::abs(current) > rescale_above) {
            current /= rescale_above;
            above /= rescale_above;
            norm /= rescale_above;
            ++rescales;
        }
    }
    out[0] = current;
    epoch[0] = rescales;
    norm += current;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const int behind = rescales - epoch[j];
        const double v = behind == 0 ? out[j] : behind == 1 ? out[j] / rescale_above : 0.0;
        out[j] = v / norm;
    }
    return out;
}

} // namespace detail

/// J_0(x) .. J_{n_max}(x), normalized with J_0 + 2 sum_k J_{2k} = 1.
inline std::vector<double> bessel_j_sequence(std::int64_t n_max, double x)
{
    detail::check_bessel_domain(n_max, x, "bessel_j_sequence");
    if (n_max < 0) {
        throw std::domain_error("bessel_j_sequence: n_max must be nonnegative");
    }
    if (x == 0.0 || x < detail::series_threshold) {
        std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
        for (std::int64_t n = 0; n <= n_max; ++n) {
            out[static_cast<std::size_t>(n)] = (x == 0.0) ? (n == 0 ? 1.0 : 0.0)
                                                          : detail::small_argument_series(n, x, true);
        }
        return out;
    }
    return detail::miller_backward(
        n_max, x, [](double k, double x_, double cur, double above) { return 2.0 * k / x_ * cur - above; },
        [](std::int64_t k) { return k % 2 == 0 ? 2.0 : 0.0; });
}

/// Regular Bessel function of the first kind, integer order.
inline double bessel_j(std::int64_t n, double x)
{
    detail::check_bessel_domain(n, x, "bessel_j");
    const std::int64_t m = std::llabs(n);
    const double v = bessel_j_sequence(m, x)[static_cast<std::size_t>(m)];
    return (n < 0 && (m % 2 == 1)) ? -v : v;
}

/// exp(-x) I_0(x) .. exp(-x) I_{n_max}(x), normalized with
/// I_0 + 2 sum_{k>=1} I_k = exp(x).
inline std::vector<double> bessel_i_scaled_sequence(std::int64_t n_max, double x)
{
    detail::check_bessel_domain(n_max, x, "bessel_i_scaled_sequence");
    if (n_max < 0) {
        throw std::domain_error("bessel_i_scaled_sequence: n_max must be nonnegative");
    }
    if (x == 0.0 || x < detail::series_threshold) {
        std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
        const double e = std::exp(-x);
        for (std::int64_t n = 0; n <= n_max; ++n) {
            out[static_cast<std::size_t>(n)] = (x == 0.0) ? (n == 0 ? 1.0 : 0.0)
                                                          : e * detail::small_argument_series(n, x, false);
        }
        return out;
    }
    return detail::miller_backward(
        n_max, x, [](double k, double x_, double cur, double above) { return 2.0 * k / x_ * cur + above; },
        [](std::int64_t) { return 2.0; });
}

/// exp(-x) I_n(x); symmetric in n.
inline double bessel_i_scaled(std::int64_t n, double x)
{
    detail::check_bessel_domain(n, x, "bessel_i_scaled");
    const std::int64_t m = std::llabs(n);
    return bessel_i_scaled_sequence(m, x)[static_cast<std::size_t>(m)];
}

/// Modified Bessel function I_n(x). Throws std::overflow_error once exp(x)
/// leaves double range; use bessel_i_scaled there.
inline double bessel_i(std::int64_t n, double x)
{
    detail::check_bessel_domain(n, x, "bessel_i");
    if (x > 700.0) {
        throw std::overflow_error("bessel_i: exp(x) overflows for x=" + std::to_string(x));
    }
    return std::exp(x) * bessel_i_scaled(n, x);
}

} // namespace qwalk

#endif
