#ifndef QWALK_FIT_HPP
#define QWALK_FIT_HPP

#include <cmath>
#include <span>
#include <stdexcept>

namespace qwalk
{

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two paired samples");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::domain_error("loglog_slope: samples must be positive");
        }
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double n = static_cast<double>(x.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) {
        throw std::domain_error("loglog_slope: abscissae are all equal");
    }
    return sxy / sxx;
}

} // namespace qwalk

#endif
