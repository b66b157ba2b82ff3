// Four-component walk on the cubic lattice, in momentum space only.
//
// Two step orderings are provided:
//   naive     U = e^{-i kx Z.X} e^{-i ky Z.Y} e^{-i kz Z.Z} e^{-i theta X.I}
//   symmetric U = e^{-i kx Z.X/2} e^{-i ky Z.Y/2} e^{-i kz Z.Z} e^{-i ky Z.Y/2} e^{-i kx Z.X/2} e^{-i theta X.I}
// (A.B is the Kronecker product of Pauli matrices.) Only the symmetric one
// has U^2 = -I at theta = pi/2, which is what a continuous-time limit needs.

#ifndef QWALK_WALK3D_HPP
#define QWALK_WALK3D_HPP

#include "dtqw.hpp"
#include "lattice.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk
{

using Matrix4c = Eigen::Matrix4cd;
using Momentum3 = std::array<double, 3>;

enum class StepOrdering
{
    naive,
    symmetric,
};

inline const char* to_string(StepOrdering o) noexcept
{
    return o == StepOrdering::naive ? "naive" : "symmetric";
}

struct MomentumOperator4
{
    Momentum3 k{};
    Matrix4c u = Matrix4c::Identity();
};

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b)
{
    Matrix4c out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

namespace detail
{

// exp(-i angle G) for G with G^2 = I.
inline Matrix4c involution_exp(double angle, const Matrix4c& g)
{
    return std::cos(angle) * Matrix4c::Identity() - cplx(0.0, std::sin(angle)) * g;
}

} // namespace detail

inline MomentumOperator4 propagator_3d(const Momentum3& k, double theta, StepOrdering ordering)
{
    using namespace pauli;
    const Matrix2c id = Matrix2c::Identity();
    const Matrix4c zx = kron(z(), x());
    const Matrix4c zy = kron(z(), y());
    const Matrix4c zz = kron(z(), z());
    const Matrix4c coin = detail::involution_exp(theta, kron(x(), id));
    MomentumOperator4 op{k, {}};
    if (ordering == StepOrdering::naive) {
        op.u = detail::involution_exp(k[0], zx) * detail::involution_exp(k[1], zy) * detail::involution_exp(k[2], zz)
               * coin;
    } else {
        const Matrix4c hx = detail::involution_exp(0.5 * k[0], zx);
        const Matrix4c hy = detail::involution_exp(0.5 * k[1], zy);
        op.u = hx * hy * detail::involution_exp(k[2], zz) * hy * hx * coin;
    }
    return op;
}

/// ||U(k, pi/2)^2 + I||_F.
inline double zeroth_order_defect(const Momentum3& k, StepOrdering ordering)
{
    const Matrix4c u = propagator_3d(k, pi / 2, ordering).u;
    return (u * u + Matrix4c::Identity()).norm();
}

/// H = -2 gamma (a X.I + bx Y.X + by Y.Y + bz Y.Z) with
///   a  = cx^2 cy^2 cz^2
///   bx = sx cx cy^2 cz^2,  by = cx sy cy cz^2,  bz = cx cy sz cz.
struct LimitHamiltonian3D
{
    Momentum3 k{};
    double a = 0.0;
    std::array<double, 3> b{};
    double gamma = 0.0;

    [[nodiscard]] Matrix4c matrix() const
    {
        using namespace pauli;
        const Matrix2c id = Matrix2c::Identity();
        return -2.0 * gamma
               * (a * kron(x(), id) + b[0] * kron(y(), x()) + b[1] * kron(y(), y()) + b[2] * kron(y(), z()));
    }
};

inline LimitHamiltonian3D limit_hamiltonian_3d(const Momentum3& k, double gamma)
{
    const double cx = std::cos(k[0]);
    const double cy = std::cos(k[1]);
    const double cz = std::cos(k[2]);
    const double sx = std::sin(k[0]);
    const double sy = std::sin(k[1]);
    const double sz = std::sin(k[2]);
    return {k, cx * cx * cy * cy * cz * cz, {sx * cx * cy * cy * cz * cz, cx * sy * cy * cz * cz, cx * cy * sz * cz},
            gamma};
}

inline constexpr double no_limit_defect_threshold = 0.1;

struct EffectiveGenerator
{
    Matrix4c h = Matrix4c::Zero();
    double defect = 0.0;
    bool continuous_limit = true; ///< false: zeroth-order defect above threshold, h not computed
};

namespace detail
{

// Principal logarithm of a unitary matrix through its (diagonal) Schur form.
inline Matrix4c unitary_log(const Matrix4c& w)
{
    const Eigen::ComplexSchur<Matrix4c> schur(w);
    const Matrix4c& t = schur.matrixT();
    const Matrix4c& q = schur.matrixU();
    Matrix4c d = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i) {
        const double phase = std::arg(t(i, i));
        if (std::abs(phase) > pi - 1e-9) {
            throw std::domain_error("unitary_log: eigenvalue on the negative real axis, branch is ambiguous");
        }
        d(i, i) = cplx(std::log(std::abs(t(i, i))), phase);
    }
    return q * d * q.adjoint();
}

} // namespace detail

/// H_eff = (i gamma / delta) log(-U(k, pi/2 - delta)^2).
inline EffectiveGenerator effective_generator_3d(const Momentum3& k, double delta, double gamma,
                                                 StepOrdering ordering)
{
    if (!(delta > 0.0) || delta > 0.3) {
        throw std::domain_error("effective_generator_3d: delta must lie in (0, 0.3], got " + std::to_string(delta));
    }
    EffectiveGenerator out;
    out.defect = zeroth_order_defect(k, ordering);
    if (out.defect > no_limit_defect_threshold) {
        out.continuous_limit = false;
        return out;
    }
    const Matrix4c u = propagator_3d(k, pi / 2 - delta, ordering).u;
    out.h = cplx(0.0, gamma / delta) * detail::unitary_log(-(u * u));
    return out;
}

/// One complex amplitude per site of an Nx x Ny x Nz periodic box; each
/// extent even, origin at (Nx/2, Ny/2, Nz/2).
struct Scalar3DField
{
    std::array<std::size_t, 3> dims{};
    std::vector<cplx> amp;
    bool wraparound_risk = false;

    Scalar3DField() = default;
    explicit Scalar3DField(std::array<std::size_t, 3> d) : dims(d), amp(d[0] * d[1] * d[2])
    {
        for (std::size_t e : d) {
            if (e == 0 || e % 2 != 0) {
                throw std::invalid_argument("Scalar3DField: every extent must be even and positive");
            }
        }
    }

    [[nodiscard]] std::size_t flat(std::size_t ix, std::size_t iy, std::size_t iz) const noexcept
    {
        return (ix * dims[1] + iy) * dims[2] + iz;
    }
    cplx& at(std::int64_t nx, std::int64_t ny, std::int64_t nz)
    {
        return amp[flat(Ring(dims[0]).index(nx), Ring(dims[1]).index(ny), Ring(dims[2]).index(nz))];
    }
    [[nodiscard]] cplx at(std::int64_t nx, std::int64_t ny, std::int64_t nz) const
    {
        return amp[flat(Ring(dims[0]).index(nx), Ring(dims[1]).index(ny), Ring(dims[2]).index(nz))];
    }
};

inline double norm2(const Scalar3DField& f)
{
    double s = 0.0;
    for (const auto& z : f.amp) {
        s += std::norm(z);
    }
    return s;
}

namespace detail
{

// Apply the unitary ring transform along one axis of a 3D field.
inline void transform_axis(Scalar3DField& f, int axis, int sign)
{
    const auto& d = f.dims;
    const std::size_t len = d[static_cast<std::size_t>(axis)];
    std::vector<cplx> line(len);
    std::array<std::size_t, 3> idx{};
    const int a1 = (axis + 1) % 3;
    const int a2 = (axis + 2) % 3;
    for (std::size_t i1 = 0; i1 < d[static_cast<std::size_t>(a1)]; ++i1) {
        for (std::size_t i2 = 0; i2 < d[static_cast<std::size_t>(a2)]; ++i2) {
            idx[static_cast<std::size_t>(a1)] = i1;
            idx[static_cast<std::size_t>(a2)] = i2;
            for (std::size_t j = 0; j < len; ++j) {
                idx[static_cast<std::size_t>(axis)] = j;
                line[j] = f.amp[f.flat(idx[0], idx[1], idx[2])];
            }
            const std::vector<cplx> out = ring_transform(line, sign);
            for (std::size_t j = 0; j < len; ++j) {
                idx[static_cast<std::size_t>(axis)] = j;
                f.amp[f.flat(idx[0], idx[1], idx[2])] = out[j];
            }
        }
    }
}

} // namespace detail

/// E(k) = -2 gamma cos kx cos ky cos kz: the eight-corner hop -(gamma/4) sum_{d in {+-1}^3}.
inline double ctqw3d_energy(const Momentum3& k, double gamma) noexcept
{
    return -2.0 * gamma * std::cos(k[0]) * std::cos(k[1]) * std::cos(k[2]);
}

inline Scalar3DField ctqw3d_evolve(const Scalar3DField& state, double gamma, double time)
{
    if (!(gamma > 0.0) || !(time >= 0.0)) {
        throw std::invalid_argument("ctqw3d_evolve: need gamma > 0 and time >= 0");
    }
    detail::require_finite(state.amp, "ctqw3d_evolve");
    if (time == 0.0) {
        return state;
    }
    Scalar3DField f = state;
    for (int axis = 0; axis < 3; ++axis) {
        detail::transform_axis(f, axis, -1);
    }
    const MomentumGrid gx(f.dims[0]);
    const MomentumGrid gy(f.dims[1]);
    const MomentumGrid gz(f.dims[2]);
    for (std::size_t ix = 0; ix < f.dims[0]; ++ix) {
        for (std::size_t iy = 0; iy < f.dims[1]; ++iy) {
            for (std::size_t iz = 0; iz < f.dims[2]; ++iz) {
                f.amp[f.flat(ix, iy, iz)] *= std::polar(1.0, -ctqw3d_energy({gx[ix], gy[iy], gz[iz]}, gamma) * time);
            }
        }
    }
    for (int axis = 0; axis < 3; ++axis) {
        detail::transform_axis(f, axis, +1);
    }
    bool risky = state.wraparound_risk;
    for (std::size_t e : f.dims) {
        risky = risky || !window_ok(e, 2.0 * gamma, time);
    }
    f.wraparound_risk = risky;
    return f;
}

} // namespace qwalk

#endif
