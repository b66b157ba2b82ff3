// Acceptance suite. `acceptance` runs every criterion; `acceptance N` runs
// criterion N only. Each criterion prints one PASS/FAIL line; the exit code
// is nonzero when any selected criterion fails.

#include "oracles.hpp"

#include <qwalk/asymptotics.hpp>
#include <qwalk/classical.hpp>
#include <qwalk/ctqw.hpp>
#include <qwalk/dtqw.hpp>
#include <qwalk/fit.hpp>
#include <qwalk/io.hpp>
#include <qwalk/limit.hpp>
#include <qwalk/walk3d.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace qwalk;

namespace
{

struct Verdict
{
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what)
    {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += (ok ? "" : "[fail] ") + what;
    }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double min_entry(const ChiralProbabilityField& p)
{
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m = std::min({m, p.right[i], p.left[i]});
    }
    return m;
}

ChiralProbabilityField right_delta(std::size_t n)
{
    ChiralProbabilityField p(n);
    p.right[p.ring.index(0)] = 1.0;
    return p;
}

Verdict conservation()
{
    Verdict v;
    double drift = 0.0;
    for (double theta : {0.0, pi / 6, pi / 4, pi / 2 - 0.01}) {
        const auto out = dtqw_evolve(initial_symmetric_entangled(2048), {theta, 2048, 1000});
        drift = std::max(drift, std::abs(norm2(out) - 1.0));
    }
    v.check(drift <= 1e-12, "DTQW norm drift " + num(drift) + " <= 1e-12");

    const auto c = ctqw_evolve(delta_scalar(1024), {0.125, 1000.0, 1024});
    const auto p = limit_pair_evolve(initial_symmetric_entangled(1024), {0.125, 1000.0, 1024});
    const double qd = std::max(std::abs(norm2(c) - 1.0), std::abs(norm2(p) - 1.0));
    v.check(qd <= 1e-13, "CTQW/pair norm drift " + num(qd) + " <= 1e-13");

    const auto pers = persistent_evolve(right_delta(512), 0.3, 10000);
    const auto lim = classical_limit_evolve(right_delta(512), 0.125, 200.0);
    ProbabilityField d0(512);
    d0.p[d0.ring.index(0)] = 1.0;
    const auto dif = diffusion_evolve(d0, 0.125, 200.0);
    const double cd = std::max({std::abs(total(pers) - 1.0), std::abs(total(lim) - 1.0), std::abs(total(dif) - 1.0)});
    double neg = std::min(min_entry(pers), min_entry(lim));
    for (double x : dif.p) {
        neg = std::min(neg, x);
    }
    v.check(cd <= 1e-12, "classical total drift " + num(cd) + " <= 1e-12");
    v.check(neg >= negative_probability_floor, "lowest entry " + num(neg) + " >= -1e-14");
    return v;
}

Verdict closed_forms()
{
    Verdict v;
    const CtqwParams cp{0.125, 100.0, 512};
    const double e1 = max_abs_diff(ctqw_evolve(delta_scalar(512), cp).amp, ctqw_analytic_field(cp).amp);
    v.check(e1 <= 1e-10, "scalar walk vs Bessel " + num(e1) + " <= 1e-10");

    const auto pair = limit_pair_evolve(initial_symmetric_entangled(512), cp);
    const auto exact = limit_analytic_field(cp);
    const double e2 = std::max(max_abs_diff(pair.right, exact.right), max_abs_diff(pair.left, exact.left));
    v.check(e2 <= 1e-9, "pair system vs Bessel " + num(e2) + " <= 1e-9");

    ProbabilityField d0(256);
    d0.p[d0.ring.index(0)] = 1.0;
    const auto dif = diffusion_evolve(d0, 0.125, 40.0);
    double e3 = 0.0;
    for (std::int64_t n = -128; n < 128; ++n) {
        e3 = std::max(e3, std::abs(dif(n) - oracle::bessel_i_series(static_cast<int>(std::abs(n)), 10.0, 80)
                                                * std::exp(-10.0)));
    }
    v.check(e3 <= 1e-10, "diffusion vs e^{-x} I_n(x) at x=10 " + num(e3) + " <= 1e-10");
    return v;
}

Verdict bch_order()
{
    Verdict v;
    const std::array<double, 4> deltas{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> mean(deltas.size(), 0.0);
    const MomentumGrid g(32);
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        for (std::size_t m = 0; m < g.size(); ++m) {
            mean[j] += bch_residual(g[m], deltas[j]) / double(g.size());
        }
    }
    const double s = loglog_slope(deltas, mean);
    v.check(std::abs(s - 2.0) <= 0.1, "slope " + num(s) + " within 2.0 +- 0.1");
    return v;
}

Verdict limit_convergence()
{
    Verdict v;
    const std::array<std::size_t, 4> taus{40, 80, 160, 320};
    for (double span : {1.0, 2.0, 4.0}) {
        const double gamma = 0.125;
        const auto r = convergence_scan(gamma, span / (2 * gamma), taus, initial_symmetric_entangled(512));
        bool decreasing = true;
        for (std::size_t i = 1; i < r.entries.size(); ++i) {
            decreasing = decreasing && r.entries[i].state_error < r.entries[i - 1].state_error;
        }
        v.check(std::abs(r.fitted_slope - 1.0) <= 0.15 && decreasing,
                "2gt=" + num(span) + " slope " + num(r.fitted_slope) + (decreasing ? " decreasing" : " NOT decreasing"));
    }
    return v;
}

Verdict chiral()
{
    Verdict v;
    const std::size_t N = 512;
    const double g = 0.125;
    const auto s = initial_symmetric_entangled(N);
    double worst = 0.0;
    for (int t = 0; t <= 100; t += 5) {
        const auto e = limit_pair_evolve(s, {g, double(t), N});
        worst = std::max(worst, std::sqrt(norm2(chiral_decompose(e, g, double(t)).minus)));
    }
    v.check(worst <= 1e-12, "max |Psi_-| " + num(worst) + " <= 1e-12");

    SpinorField r(128);
    const auto rs = oracle::random_state(256, 1);
    for (std::size_t i = 0; i < 128; ++i) {
        r.right[i] = rs[i];
        r.left[i] = rs[128 + i];
    }
    const auto a = chiral_evolve(chiral_decompose(r, g, 0.0), g, 37.0);
    const auto b = chiral_decompose(limit_pair_evolve(r, {g, 37.0, 128}), g, 37.0);
    const double c = std::max(distance(a.plus, b.plus), distance(a.minus, b.minus));
    v.check(c <= 1e-12, "decompose/evolve commutator " + num(c) + " <= 1e-12");
    return v;
}

double ctqw_weak_distance(double t)
{
    const std::size_t n = required_sites(0.25, t) + 64;
    const auto sim = density(ctqw_evolve(delta_scalar(n), {0.125, t, n}));
    return empirical_density_compare(sim, WeakLimitDensity::ctqw(0.125, t)).distance;
}

double dtqw_weak_distance(std::size_t tau)
{
    const double theta = std::acos(0.5);
    const std::size_t n = required_sites(0.5, double(tau + 1)) + 64;
    const auto a = dtqw_evolve(initial_symmetric_entangled(n), {theta, n, tau});
    const auto smooth = parity_smoothed(density(a), density(dtqw_step(a, theta)));
    return empirical_density_compare(smooth, WeakLimitDensity::dtqw(theta, double(tau) + 0.5)).distance;
}

Verdict weak_limits()
{
    Verdict v;
    const double m1 = WeakLimitDensity::ctqw(0.125, 1000.0).total_mass();
    const double m2 = WeakLimitDensity::dtqw(std::acos(0.5), 1000.0).total_mass();
    v.check(std::abs(m1 - 1.0) <= 1e-6 && std::abs(m2 - 1.0) <= 1e-6,
            "analytic masses " + num(m1) + ", " + num(m2));
    const double c1000 = ctqw_weak_distance(1000.0);
    const double d1000 = dtqw_weak_distance(1000);
    v.check(c1000 <= 0.05, "CTQW interior L1 at t=1000 " + num(c1000) + " <= 0.05");
    v.check(d1000 <= 0.05, "DTQW interior L1 at tau=1000 " + num(d1000) + " <= 0.05");
    const double c500 = ctqw_weak_distance(500.0);
    const double c2000 = ctqw_weak_distance(2000.0);
    const double d500 = dtqw_weak_distance(500);
    const double d2000 = dtqw_weak_distance(2000);
    v.check(c2000 < c500, "CTQW L1 t=2000 " + num(c2000) + " < t=500 " + num(c500));
    v.check(d2000 < d500, "DTQW L1 tau=2000 " + num(d2000) + " < tau=500 " + num(d500));
    return v;
}

Verdict classical_chain()
{
    Verdict v;
    ChiralProbabilityField p(64);
    const auto r = oracle::random_state(128, 5);
    for (std::size_t i = 0; i < 64; ++i) {
        p.right[i] = std::norm(r[i]);
        p.left[i] = std::norm(r[64 + i]);
    }
    double two = 0.0;
    for (double a : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        two = std::max(two, persistent_two_step_check(p, a));
    }
    v.check(two <= 1e-14, "two-step defect " + num(two) + " <= 1e-14");

    const double g = 0.125;
    const double dt = 1e-3;
    const auto discrete = persistent_evolve(right_delta(128), 2 * g * dt, 20000);
    const double l1 = l1_distance(classical_limit_evolve(right_delta(128), g, 20.0), discrete);
    v.check(l1 <= 1e-3, "limit vs persistent walk L1 " + num(l1) + " <= 1e-3");

    const double dd = combined_density_diffusion_check(right_delta(256), g, 40.0);
    v.check(dd <= 1e-10, "combined-density diffusion defect " + num(dd) + " <= 1e-10");
    return v;
}

Verdict coinless()
{
    Verdict v;
    bool exact = true;
    for (std::size_t n : {8u, 16u, 32u}) {
        const auto s = even_odd_split(n);
        exact = exact && (s.even.h + s.odd.h) == laplacian_hamiltonian(n).h;
    }
    v.check(exact, "H_even + H_odd == H");
    double worst = 0.0;
    for (double theta : {pi / 6, pi / 3}) {
        for (std::size_t n : {8u, 16u, 32u}) {
            worst = std::max(worst, coinless_spectral_equivalence(theta, n));
        }
    }
    v.check(worst <= 1e-10, "spectral distance " + num(worst) + " <= 1e-10");
    return v;
}

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

Verdict three_d()
{
    Verdict v;
    double eig = 0.0;
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            for (int l = 0; l < 7; ++l) {
                const Momentum3 k{-pi + 2 * pi * i / 7, -pi + 2 * pi * j / 7, -pi + 2 * pi * l / 7};
                const Eigen::SelfAdjointEigenSolver<Matrix4c> es(limit_hamiltonian_3d(k, 0.125).matrix());
                const double e = 0.25 * std::abs(std::cos(k[0]) * std::cos(k[1]) * std::cos(k[2]));
                const Eigen::Vector4d ref(-e, -e, e, e);
                eig = std::max(eig, (es.eigenvalues() - ref).cwiseAbs().maxCoeff());
            }
        }
    }
    v.check(eig <= 1e-13, "eigenvalue identity " + num(eig) + " <= 1e-13");

    double sym = 0.0;
    double naive = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            for (int l = 0; l < 5; ++l) {
                const Momentum3 k{-pi + 2 * pi * i / 5, -pi + 2 * pi * j / 5, -pi + 2 * pi * l / 5};
                sym = std::max(sym, zeroth_order_defect(k, StepOrdering::symmetric));
                naive = std::max(naive, zeroth_order_defect(k, StepOrdering::naive));
            }
        }
    }
    v.check(sym <= 1e-13, "symmetric defect " + num(sym) + " <= 1e-13");
    v.check(naive >= 0.1, "naive defect max " + num(naive) + " >= 0.1");

    const Momentum3 k{0.5, 0.7, 0.9};
    const auto target = limit_hamiltonian_3d(k, 0.125).matrix();
    const std::vector<double> ds{0.04, 0.02, 0.01, 0.005};
    std::vector<double> errs;
    for (double d : ds) {
        errs.push_back((effective_generator_3d(k, d, 0.125, StepOrdering::symmetric).h - target).norm());
    }
    const double slope = loglog_slope(ds, errs);
    v.check(std::abs(slope - 1.0) <= 0.2, "effective generator slope " + num(slope) + " within 1.0 +- 0.2");

    const std::size_t n = 8;
    Scalar3DField f({n, n, n});
    f.amp = oracle::random_state(n * n * n, 9);
    const auto out = ctqw3d_evolve(f, 0.125, 10.0);
    const Eigen::VectorXcd ref = oracle::dense_evolve(
        corner_hamiltonian(n, 0.125), Eigen::Map<const Eigen::VectorXcd>(f.amp.data(), Eigen::Index(f.amp.size())),
        10.0);
    double e3 = 0.0;
    for (std::size_t i = 0; i < f.amp.size(); ++i) {
        e3 = std::max(e3, std::abs(out.amp[i] - ref(Eigen::Index(i))));
    }
    v.check(e3 <= 1e-10, "3D evolution vs dense exponential " + num(e3) + " <= 1e-10");
    return v;
}

Verdict figure_one()
{
    Verdict v;
    const double theta = std::acos(0.25);
    const double g = 0.125;
    const std::size_t N = 256;
    const std::size_t T = 100;
    io::DensitySurface a;
    io::DensitySurface b;
    io::DensitySurface c;
    const auto start = initial_symmetric_entangled(N);
    auto walk = start;
    for (std::size_t t = 0; t <= T; ++t) {
        for (auto* s : {&a, &b, &c}) {
            s->times.push_back(double(t));
        }
        a.rows.push_back(density(walk));
        b.rows.push_back(density(limit_pair_evolve(start, {g, double(t), N})));
        c.rows.push_back(density(ctqw_evolve(delta_scalar(N), {g, double(t), N})));
        walk = dtqw_step(walk, theta);
    }
    const std::filesystem::path dir = "figure1_acceptance";
    std::filesystem::create_directories(dir);
    bool written = true;
    const std::pair<const char*, const io::DensitySurface*> panels[] = {{"panel_a", &a}, {"panel_b", &b}, {"panel_c", &c}};
    for (const auto& [name, s] : panels) {
        std::ofstream csv(dir / (std::string(name) + ".csv"));
        io::write_csv(csv, *s);
        std::ofstream svg(dir / (std::string(name) + ".svg"));
        io::write_svg(svg, *s, name);
        written = written && csv.good() && svg.good();
    }
    v.check(written, "three CSV/SVG surfaces written");

    const double bc = l1_distance(b.rows.back(), c.rows.back());
    const double ab = l1_distance(a.rows.back(), b.rows.back());
    v.check(bc <= 0.02, "L1(b,c) " + num(bc) + " <= 0.02");
    v.check(ab <= 0.35, "L1(a,b) " + num(ab) + " <= 0.35");

    double vmax = 0.0;
    const MomentumGrid grid(2048);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        vmax = std::max(vmax, std::abs(dispersion(grid[m], theta).group_velocity));
    }
    v.check(std::abs(vmax - 0.25) <= 1e-5, "max group velocity " + num(vmax) + " = cos(theta) +- 1e-5");

    const auto& last = a.rows.back();
    std::int64_t pos = 1;
    std::int64_t neg = -1;
    for (std::int64_t n = 1; n < 128; ++n) {
        pos = last(n) > last(pos) ? n : pos;
        neg = last(-n) > last(neg) ? -n : neg;
    }
    const bool peaks = std::abs(double(pos) - 25.0) <= 4.0 && std::abs(double(neg) + 25.0) <= 4.0;
    v.check(peaks, "twin peaks at " + std::to_string(neg) + ", " + std::to_string(pos) + " (light cone +-25)");
    return v;
}

struct Criterion
{
    const char* name;
    std::function<Verdict()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all = {
        {"unitarity and conservation", conservation},
        {"closed-form solutions", closed_forms},
        {"two-step formula order", bch_order},
        {"convergence to the continuous limit", limit_convergence},
        {"chiral structure", chiral},
        {"weak limits", weak_limits},
        {"classical limit chain", classical_chain},
        {"coinless equivalence", coinless},
        {"three dimensions", three_d},
        {"figure reproduction", figure_one},
    };
    std::vector<std::size_t> selected;
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > static_cast<int>(all.size())) {
            std::fprintf(stderr, "usage: acceptance [1-%zu]\n", all.size());
            return 2;
        }
        selected.push_back(static_cast<std::size_t>(k - 1));
    } else {
        for (std::size_t i = 0; i < all.size(); ++i) {
            selected.push_back(i);
        }
    }
    bool ok = true;
    for (std::size_t i : selected) {
        Verdict v;
        try {
            v = all[i].run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, all[i].name, v.detail.c_str());
        std::fflush(stdout);
        ok = ok && v.pass;
    }
    return ok ? 0 : 1;
}
