// qwalk: command-line front end for the walk engines.
//
// Exit codes: 0 success, 1 usage error, 2 window-guard violation under --strict.

#include <qwalk/asymptotics.hpp>
#include <qwalk/classical.hpp>
#include <qwalk/ctqw.hpp>
#include <qwalk/dtqw.hpp>
#include <qwalk/fit.hpp>
#include <qwalk/io.hpp>
#include <qwalk/lattice.hpp>
#include <qwalk/limit.hpp>
#include <qwalk/walk3d.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace
{

using json = nlohmann::ordered_json;
using namespace qwalk;

constexpr int exit_usage = 1;
constexpr int exit_guard = 2;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct GuardViolation : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Common
{
    std::string format;
    std::string output;
    bool strict = false;
};

// Angle given either directly or through its cosine; at most one of the two.
struct Angle
{
    std::optional<double> theta;
    std::optional<double> cos_theta;

    [[nodiscard]] double resolve(std::optional<double> fallback_cos = std::nullopt) const
    {
        if (theta && cos_theta) {
            throw UsageError("give exactly one of --theta and --cos-theta");
        }
        if (theta) {
            return *theta;
        }
        if (cos_theta) {
            if (!(*cos_theta >= 0.0 && *cos_theta <= 1.0)) {
                throw UsageError("--cos-theta must lie in [0, 1]");
            }
            return std::acos(*cos_theta);
        }
        if (fallback_cos) {
            return std::acos(*fallback_cos);
        }
        throw UsageError("give exactly one of --theta and --cos-theta");
    }
};

void add_angle(CLI::App* app, Angle& a)
{
    app->add_option("--theta", a.theta, "coin angle in radians");
    app->add_option("--cos-theta", a.cos_theta, "cosine of the coin angle");
}

// Window guard: warn, or fail under --strict.
void guard(const Common& c, std::size_t n_sites, double speed, double duration, const std::string& what)
{
    if (window_ok(n_sites, speed, duration)) {
        return;
    }
    const std::string msg = what + ": n_sites=" + std::to_string(n_sites) + " is below the window guard "
                            + std::to_string(required_sites(speed, duration)) + "; results may wrap around";
    if (c.strict) {
        throw GuardViolation(msg);
    }
    std::cerr << "warning: " << msg << '\n';
}

std::size_t auto_sites(std::optional<std::size_t> given, double speed, double duration)
{
    if (given) {
        return *given;
    }
    std::size_t n = std::max<std::size_t>(256, required_sites(speed, duration));
    return n + (n % 2);
}

// Writes to --output, or stdout when no path is given.
class Sink
{
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw UsageError("cannot open output file '" + path + "'");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void emit_json(const Common& c, const json& doc)
{
    Sink s(c.output);
    s.stream() << doc.dump(2) << '\n';
}

void require_format(const Common& c, std::initializer_list<const char*> allowed, const char* command)
{
    for (const char* f : allowed) {
        if (c.format == f) {
            return;
        }
    }
    throw UsageError(std::string(command) + ": format '" + c.format + "' is not available");
}

template <class Field>
Field read_state_file(const std::string& path, Field (*reader)(std::istream&))
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("initial state: '" + path + "' is neither a known state name nor a readable file");
    }
    try {
        return reader(in);
    } catch (const std::runtime_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

SpinorField spinor_initial(const std::string& name, std::size_t n_sites)
{
    if (name == "symmetric-entangled") {
        return initial_symmetric_entangled(n_sites);
    }
    if (name == "delta") {
        return spinor_delta(n_sites, 0);
    }
    auto f = read_state_file<SpinorField>(name, io::read_spinor_csv);
    if (f.size() != n_sites) {
        throw UsageError("initial state file has " + std::to_string(f.size()) + " sites, expected "
                         + std::to_string(n_sites));
    }
    return f;
}

ScalarField scalar_initial(const std::string& name, std::size_t n_sites)
{
    if (name == "delta") {
        return delta_scalar(n_sites);
    }
    if (name == "symmetric-entangled") {
        throw UsageError("the symmetric entangled state needs --system pair");
    }
    auto f = read_state_file<ScalarField>(name, io::read_scalar_csv);
    if (f.size() != n_sites) {
        throw UsageError("initial state file has " + std::to_string(f.size()) + " sites, expected "
                         + std::to_string(n_sites));
    }
    return f;
}

std::size_t parse_sites(std::optional<std::size_t> v, const char* what)
{
    if (!v) {
        throw UsageError(std::string(what) + ": --n-sites is required");
    }
    if (*v < 2 || *v % 2 != 0) {
        throw UsageError(std::string(what) + ": --n-sites must be even and at least 2");
    }
    return *v;
}

json density_metrics(const ProbabilityField& p)
{
    return {{"total_probability", total(p)}, {"mean_position", mean_position(p)},
            {"variance", position_variance(p)}};
}

// ---------------------------------------------------------------- dtqw

struct DtqwOpts
{
    Angle angle;
    std::size_t steps = 100;
    std::optional<std::size_t> n_sites;
    std::string initial = "symmetric-entangled";
    std::string method = "real";
};

int run_dtqw(const Common& c, const DtqwOpts& o)
{
    require_format(c, {"csv", "json", "svg"}, "dtqw");
    const double theta = o.angle.resolve();
    if (!(theta >= 0.0 && theta <= pi / 2)) {
        throw UsageError("dtqw: theta must lie in [0, pi/2]");
    }
    if (o.method != "real" && o.method != "momentum") {
        throw UsageError("dtqw: --method must be real or momentum");
    }
    const std::size_t n = auto_sites(o.n_sites, std::cos(theta), double(o.steps));
    parse_sites(n, "dtqw");
    guard(c, n, std::cos(theta), double(o.steps), "dtqw");
    const SpinorField init = spinor_initial(o.initial, n);
    const DtqwParams p{theta, n, o.steps};
    const json config = {{"command", "dtqw"}, {"theta", theta},      {"cos_theta", std::cos(theta)},
                         {"steps", o.steps},  {"n_sites", n},         {"initial", o.initial},
                         {"method", o.method}};

    if (c.format == "svg") {
        io::DensitySurface s;
        SpinorField cur = init;
        for (std::size_t tau = 0; tau <= o.steps; ++tau) {
            s.times.push_back(double(tau));
            s.rows.push_back(density(cur));
            cur = dtqw_step(cur, theta);
        }
        Sink sink(c.output);
        io::write_svg(sink.stream(), s, "coined walk density");
        return 0;
    }
    const SpinorField out = o.method == "real" ? dtqw_evolve(init, p) : dtqw_evolve_momentum(init, p);
    if (c.format == "csv") {
        Sink sink(c.output);
        io::write_csv(sink.stream(), out);
        return 0;
    }
    json metrics = density_metrics(density(out));
    metrics["norm"] = std::sqrt(norm2(out));
    metrics["max_group_velocity"] = theta > 0.0 ? std::cos(theta) : 1.0;
    metrics["wraparound_risk"] = out.wraparound_risk;
    json results;
    const ProbabilityField rho = density(out);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        results["density"].push_back(rho.p[i]);
    }
    emit_json(c, {{"config", config}, {"results", results}, {"metrics", metrics}});
    return 0;
}

// ---------------------------------------------------------------- ctqw

struct CtqwOpts
{
    std::string system = "scalar";
    double gamma = 0.125;
    double time = 0.0;
    std::optional<std::size_t> n_sites;
    std::string initial = "delta";
};

int run_ctqw(const Common& c, const CtqwOpts& o)
{
    require_format(c, {"csv", "json", "svg"}, "ctqw");
    if (o.system != "scalar" && o.system != "pair") {
        throw UsageError("ctqw: --system must be scalar or pair");
    }
    if (!(o.gamma > 0.0) || !(o.time >= 0.0)) {
        throw UsageError("ctqw: need --gamma > 0 and --time >= 0");
    }
    const std::size_t n = auto_sites(o.n_sites, 2.0 * o.gamma, o.time);
    parse_sites(n, "ctqw");
    guard(c, n, 2.0 * o.gamma, o.time, "ctqw");
    const CtqwParams p{o.gamma, o.time, n};
    const json config = {{"command", "ctqw"}, {"system", o.system}, {"gamma", o.gamma},
                         {"time", o.time},    {"n_sites", n},       {"initial", o.initial}};

    if (o.system == "scalar") {
        const ScalarField init = scalar_initial(o.initial, n);
        if (c.format == "svg") {
            io::DensitySurface s;
            for (int t = 0; t <= static_cast<int>(std::floor(o.time)); ++t) {
                s.times.push_back(t);
                s.rows.push_back(density(ctqw_evolve(init, {o.gamma, double(t), n})));
            }
            Sink sink(c.output);
            io::write_svg(sink.stream(), s, "scalar walk density");
            return 0;
        }
        const ScalarField out = ctqw_evolve(init, p);
        if (c.format == "csv") {
            Sink sink(c.output);
            io::write_csv(sink.stream(), out);
            return 0;
        }
        json metrics = density_metrics(density(out));
        metrics["norm"] = std::sqrt(norm2(out));
        if (o.initial == "delta") {
            const ScalarField exact = ctqw_analytic_field(p);
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(out.amp[i] - exact.amp[i]));
            }
            metrics["max_error_vs_bessel"] = worst;
        }
        metrics["wraparound_risk"] = out.wraparound_risk;
        emit_json(c, {{"config", config}, {"results", {{"density", density(out).p}}}, {"metrics", metrics}});
        return 0;
    }

    const SpinorField init = spinor_initial(o.initial == "delta" ? "delta" : o.initial, n);
    if (c.format == "svg") {
        io::DensitySurface s;
        for (int t = 0; t <= static_cast<int>(std::floor(o.time)); ++t) {
            s.times.push_back(t);
            s.rows.push_back(density(limit_pair_evolve(init, {o.gamma, double(t), n})));
        }
        Sink sink(c.output);
        io::write_svg(sink.stream(), s, "limit pair density");
        return 0;
    }
    const SpinorField out = limit_pair_evolve(init, p);
    if (c.format == "csv") {
        Sink sink(c.output);
        io::write_csv(sink.stream(), out);
        return 0;
    }
    const ChiralPair pair = chiral_decompose(out, o.gamma, o.time);
    json metrics = density_metrics(density(out));
    metrics["norm"] = std::sqrt(norm2(out));
    metrics["plus_norm"] = std::sqrt(norm2(pair.plus));
    metrics["minus_norm"] = std::sqrt(norm2(pair.minus));
    if (o.initial == "symmetric-entangled") {
        const SpinorField exact = limit_analytic_field(p);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max({worst, std::abs(out.right[i] - exact.right[i]), std::abs(out.left[i] - exact.left[i])});
        }
        metrics["max_error_vs_bessel"] = worst;
    }
    metrics["wraparound_risk"] = out.wraparound_risk;
    emit_json(c, {{"config", config}, {"results", {{"density", density(out).p}}}, {"metrics", metrics}});
    return 0;
}

// ---------------------------------------------------------------- limit-scan

struct LimitScanOpts
{
    double gamma = 0.125;
    double time = 8.0;
    std::vector<std::size_t> taus{40, 80, 160, 320};
    std::optional<std::size_t> n_sites;
    std::string initial = "symmetric-entangled";
};

int run_limit_scan(const Common& c, const LimitScanOpts& o)
{
    require_format(c, {"json", "csv"}, "limit-scan");
    if (!(o.gamma > 0.0) || !(o.time >= 0.0)) {
        throw UsageError("limit-scan: need --gamma > 0 and --time >= 0");
    }
    for (std::size_t tau : o.taus) {
        if (tau == 0 || tau % 2 != 0) {
            throw UsageError("limit-scan: every --tau must be even and positive");
        }
    }
    const std::size_t n = auto_sites(o.n_sites, 1.0, 2.0 * o.gamma * o.time);
    parse_sites(n, "limit-scan");
    // the walk at theta = pi/2 - delta has light-cone speed sin(delta) <= delta
    guard(c, n, 1.0, 2.0 * o.gamma * o.time, "limit-scan");
    const LimitScanResult r = convergence_scan(o.gamma, o.time, o.taus, spinor_initial(o.initial, n));
    if (c.format == "csv") {
        Sink sink(c.output);
        sink.stream() << "tau,delta,state_error\n";
        for (const auto& e : r.entries) {
            sink.stream() << e.tau << ',' << io::format_number(e.delta) << ',' << io::format_number(e.state_error)
                          << '\n';
        }
        return 0;
    }
    json entries = json::array();
    bool decreasing = true;
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        const auto& e = r.entries[i];
        entries.push_back({{"tau", e.tau}, {"delta", e.delta}, {"state_error", e.state_error}});
        if (i > 0 && !(e.state_error < r.entries[i - 1].state_error)) {
            decreasing = false;
        }
    }
    const json config = {{"command", "limit-scan"}, {"gamma", o.gamma}, {"time", o.time},
                         {"tau", o.taus},          {"n_sites", n},     {"initial", o.initial}};
    json metrics = {{"fitted_slope", std::isfinite(r.fitted_slope) ? json(r.fitted_slope) : json(nullptr)},
                    {"errors_strictly_decreasing", decreasing},
                    {"wraparound_risk", r.wraparound_risk}};
    emit_json(c, {{"config", config}, {"results", {{"entries", entries}}}, {"metrics", metrics}});
    return 0;
}

// ---------------------------------------------------------------- bch-scan

struct BchOpts
{
    std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> ks;
    std::size_t k_points = 32;
};

int run_bch_scan(const Common& c, const BchOpts& o)
{
    require_format(c, {"json", "csv"}, "bch-scan");
    if (o.deltas.empty()) {
        throw UsageError("bch-scan: need at least one --delta");
    }
    std::vector<double> ks = o.ks;
    if (ks.empty()) {
        if (o.k_points == 0) {
            throw UsageError("bch-scan: --k-points must be positive");
        }
        const MomentumGrid g(o.k_points);
        for (std::size_t m = 0; m < g.size(); ++m) {
            ks.push_back(g[m]);
        }
    }
    std::vector<double> mean;
    json rows = json::array();
    for (double d : o.deltas) {
        double s = 0.0;
        json per_k = json::array();
        for (double k : ks) {
            const double r = bch_residual(k, d);
            s += r;
            per_k.push_back(r);
        }
        mean.push_back(s / double(ks.size()));
        rows.push_back({{"delta", d}, {"mean_residual", mean.back()}, {"residuals", per_k}});
    }
    if (c.format == "csv") {
        Sink sink(c.output);
        sink.stream() << "delta,mean_residual\n";
        for (std::size_t i = 0; i < mean.size(); ++i) {
            sink.stream() << io::format_number(o.deltas[i]) << ',' << io::format_number(mean[i]) << '\n';
        }
        return 0;
    }
    json metrics;
    metrics["fitted_slope"] = o.deltas.size() >= 2 ? json(loglog_slope(o.deltas, mean)) : json(nullptr);
    emit_json(c, {{"config", {{"command", "bch-scan"}, {"delta", o.deltas}, {"k", ks}}},
                  {"results", {{"scan", rows}}},
                  {"metrics", metrics}});
    return 0;
}

// ---------------------------------------------------------------- classical

struct ClassicalOpts
{
    std::string mode = "limit";
    double alpha = 0.5;
    std::size_t steps = 100;
    double gamma = 0.125;
    double time = 20.0;
    std::optional<std::size_t> n_sites;
    double dt = 1e-3;
};

int run_classical(const Common& c, const ClassicalOpts& o)
{
    require_format(c, {"json", "csv"}, "classical");
    const bool discrete = o.mode == "persistent" || o.mode == "two-step";
    if (!discrete && o.mode != "limit" && o.mode != "diffusion-check" && o.mode != "compare") {
        throw UsageError("classical: --mode must be persistent, two-step, limit, compare or diffusion-check");
    }
    if (!discrete && (!(o.gamma > 0.0) || !(o.time >= 0.0))) {
        throw UsageError("classical: need --gamma > 0 and --time >= 0");
    }
    if (!(o.alpha >= 0.0 && o.alpha <= 1.0)) {
        throw UsageError("classical: --alpha must lie in [0, 1]");
    }
    const double reach = discrete ? double(o.steps) : 2.0 * o.gamma * o.time;
    const std::size_t n = auto_sites(o.n_sites, 1.0, reach);
    parse_sites(n, "classical");
    guard(c, n, 1.0, reach, "classical");
    ChiralProbabilityField init(n);
    init.right[init.ring.index(0)] = 1.0;

    json config = {{"command", "classical"}, {"mode", o.mode}, {"n_sites", n}};
    json metrics;
    ChiralProbabilityField out;
    if (o.mode == "persistent") {
        config["alpha"] = o.alpha;
        config["steps"] = o.steps;
        out = persistent_evolve(init, o.alpha, o.steps);
    } else if (o.mode == "two-step") {
        config["alpha"] = o.alpha;
        out = persistent_two_step(init, o.alpha);
        metrics["two_step_defect"] = persistent_two_step_check(init, o.alpha);
    } else {
        config["gamma"] = o.gamma;
        config["time"] = o.time;
        out = classical_limit_evolve(init, o.gamma, o.time);
        if (o.mode == "diffusion-check") {
            metrics["diffusion_defect"] = combined_density_diffusion_check(init, o.gamma, o.time);
            const ProbabilityField p = combined_density(out);
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(p.p[i] - diffusion_analytic(p.ring.site(i), o.gamma, o.time)));
            }
            metrics["max_error_vs_bessel"] = worst;
        } else if (o.mode == "compare") {
            if (!(o.dt > 0.0) || 2.0 * o.gamma * o.dt > 1.0) {
                throw UsageError("classical: --dt must be positive with 2 gamma dt <= 1");
            }
            config["dt"] = o.dt;
            const auto steps = static_cast<std::size_t>(std::llround(o.time / o.dt));
            metrics["l1_vs_persistent"] = l1_distance(out, persistent_evolve(init, 2.0 * o.gamma * o.dt, steps));
        }
    }
    if (c.format == "csv") {
        Sink sink(c.output);
        io::write_csv(sink.stream(), out);
        return 0;
    }
    double lowest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lowest = std::min({lowest, out.right[i], out.left[i]});
    }
    metrics["total_probability"] = total(out);
    metrics["min_entry"] = lowest;
    const ProbabilityField combined = combined_density(out);
    metrics["combined_variance"] = position_variance(combined);
    emit_json(c, {{"config", config},
                  {"results", {{"p_R", out.right}, {"p_L", out.left}}},
                  {"metrics", metrics}});
    return 0;
}

// ---------------------------------------------------------------- weaklimit

struct WeakOpts
{
    std::string walk = "ctqw";
    double gamma = 0.125;
    double time = 1000.0;
    Angle angle;
    std::size_t tau = 1000;
    double interior = default_interior_fraction;
    std::size_t bins = default_weak_limit_bins;
    std::optional<std::size_t> n_sites;
};

int run_weaklimit(const Common& c, const WeakOpts& o)
{
    require_format(c, {"json", "csv"}, "weaklimit");
    ProbabilityField sim;
    WeakLimitDensity law;
    json config = {{"command", "weaklimit"}, {"walk", o.walk}, {"interior_fraction", o.interior}, {"bins", o.bins}};
    if (o.walk == "ctqw") {
        if (!(o.gamma > 0.0) || !(o.time > 0.0)) {
            throw UsageError("weaklimit: need --gamma > 0 and --time > 0");
        }
        const std::size_t n = auto_sites(o.n_sites, 2.0 * o.gamma, o.time);
        parse_sites(n, "weaklimit");
        guard(c, n, 2.0 * o.gamma, o.time, "weaklimit");
        sim = density(ctqw_evolve(delta_scalar(n), {o.gamma, o.time, n}));
        law = WeakLimitDensity::ctqw(o.gamma, o.time);
        config["gamma"] = o.gamma;
        config["time"] = o.time;
        config["n_sites"] = n;
    } else if (o.walk == "dtqw") {
        const double theta = o.angle.resolve(0.5);
        if (!(theta > 0.0 && theta < pi / 2)) {
            throw UsageError("weaklimit: theta must lie in (0, pi/2)");
        }
        const std::size_t n = auto_sites(o.n_sites, std::cos(theta), double(o.tau + 1));
        parse_sites(n, "weaklimit");
        guard(c, n, std::cos(theta), double(o.tau + 1), "weaklimit");
        const SpinorField a = dtqw_evolve(initial_symmetric_entangled(n), {theta, n, o.tau});
        sim = parity_smoothed(density(a), density(dtqw_step(a, theta)));
        law = WeakLimitDensity::dtqw(theta, double(o.tau) + 0.5);
        config["theta"] = theta;
        config["tau"] = o.tau;
        config["n_sites"] = n;
        config["initial"] = "symmetric-entangled";
    } else {
        throw UsageError("weaklimit: --walk must be ctqw or dtqw");
    }
    const DensityComparison cmp = empirical_density_compare(sim, law, o.interior, o.bins);
    if (c.format == "csv") {
        Sink sink(c.output);
        sink.stream() << "n,simulated,analytic\n";
        for (std::size_t i = 0; i < sim.size(); ++i) {
            const auto x = double(sim.ring.site(i));
            sink.stream() << sim.ring.site(i) << ',' << io::format_number(sim.p[i]) << ','
                          << io::format_number(law.mass(x - 0.5, x + 0.5)) << '\n';
        }
        return 0;
    }
    emit_json(c, {{"config", config},
                  {"results", {{"edge", law.edge()}, {"density_at_origin", law(0.0)}}},
                  {"metrics",
                   {{"interior_l1", cmp.distance},
                    {"excluded_mass", cmp.excluded_mass},
                    {"analytic_total_mass", law.total_mass()},
                    {"wraparound_risk", sim.wraparound_risk}}}});
    return 0;
}

// ---------------------------------------------------------------- walk3d

struct Walk3dOpts
{
    std::string mode = "defect";
    std::string ordering = "symmetric";
    std::vector<double> k{0.0, 0.0, 0.0};
    std::optional<double> theta;
    double delta = 0.01;
    double gamma = 0.125;
    double time = 10.0;
    std::optional<std::size_t> n_sites;
};

json matrix_json(const Matrix4c& m)
{
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

int run_walk3d(const Common& c, const Walk3dOpts& o)
{
    require_format(c, {"json"}, "walk3d");
    if (o.k.size() != 3) {
        throw UsageError("walk3d: --k takes three comma-separated values");
    }
    StepOrdering ordering;
    if (o.ordering == "naive") {
        ordering = StepOrdering::naive;
    } else if (o.ordering == "symmetric") {
        ordering = StepOrdering::symmetric;
    } else {
        throw UsageError("walk3d: --ordering must be naive or symmetric");
    }
    const Momentum3 k{o.k[0], o.k[1], o.k[2]};
    json config = {{"command", "walk3d"}, {"mode", o.mode}, {"ordering", o.ordering}, {"k", o.k}};
    json results = json::object();
    json metrics = json::object();
    if (o.mode == "defect") {
        metrics["zeroth_order_defect"] = zeroth_order_defect(k, ordering);
        metrics["continuous_limit"] = metrics["zeroth_order_defect"].get<double>() <= no_limit_defect_threshold;
    } else if (o.mode == "propagator") {
        const double th = o.theta.value_or(pi / 2);
        config["theta"] = th;
        const Matrix4c u = propagator_3d(k, th, ordering).u;
        results["u"] = matrix_json(u);
        metrics["unitarity_defect"] = (u.adjoint() * u - Matrix4c::Identity()).norm();
    } else if (o.mode == "hamiltonian") {
        config["gamma"] = o.gamma;
        const auto f = limit_hamiltonian_3d(k, o.gamma);
        const Eigen::SelfAdjointEigenSolver<Matrix4c> es(f.matrix());
        results["a"] = f.a;
        results["b"] = f.b;
        results["h"] = matrix_json(f.matrix());
        std::vector<double> ev(4);
        for (int i = 0; i < 4; ++i) {
            ev[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        }
        results["eigenvalues"] = ev;
        metrics["expected_eigenvalue"] = 2.0 * o.gamma * std::abs(std::cos(k[0]) * std::cos(k[1]) * std::cos(k[2]));
    } else if (o.mode == "generator") {
        config["gamma"] = o.gamma;
        config["delta"] = o.delta;
        const EffectiveGenerator g = effective_generator_3d(k, o.delta, o.gamma, ordering);
        metrics["zeroth_order_defect"] = g.defect;
        metrics["continuous_limit"] = g.continuous_limit;
        if (g.continuous_limit) {
            results["h_eff"] = matrix_json(g.h);
            metrics["distance_to_limit_hamiltonian"] = (g.h - limit_hamiltonian_3d(k, o.gamma).matrix()).norm();
        } else {
            results["message"] = "no continuous-time limit";
        }
    } else if (o.mode == "ctqw") {
        if (!(o.gamma > 0.0) || !(o.time >= 0.0)) {
            throw UsageError("walk3d: need --gamma > 0 and --time >= 0");
        }
        const std::size_t n = o.n_sites.value_or(32);
        parse_sites(n, "walk3d");
        guard(c, n, 2.0 * o.gamma, o.time, "walk3d");
        config["gamma"] = o.gamma;
        config["time"] = o.time;
        config["n_sites"] = n;
        Scalar3DField f({n, n, n});
        f.at(0, 0, 0) = 1.0;
        const Scalar3DField out = ctqw3d_evolve(f, o.gamma, o.time);
        const cplx origin = out.at(0, 0, 0);
        results["origin_amplitude"] = {origin.real(), origin.imag()};
        metrics["norm"] = std::sqrt(norm2(out));
        metrics["wraparound_risk"] = out.wraparound_risk;
    } else {
        throw UsageError("walk3d: --mode must be defect, propagator, hamiltonian, generator or ctqw");
    }
    emit_json(c, {{"config", config}, {"results", results}, {"metrics", metrics}});
    return 0;
}

// ---------------------------------------------------------------- coinless

struct CoinlessOpts
{
    Angle angle;
    std::vector<std::size_t> n_sites{8, 16, 32};
};

int run_coinless(const Common& c, const CoinlessOpts& o)
{
    require_format(c, {"json"}, "coinless");
    const double theta = o.angle.resolve();
    json rows = json::array();
    double worst = 0.0;
    for (std::size_t n : o.n_sites) {
        parse_sites(n, "coinless");
        const double d = coinless_spectral_equivalence(theta, n);
        const auto even = even_odd_split(n);
        const bool exact = (even.even.h + even.odd.h) == laplacian_hamiltonian(n).h;
        const Eigen::MatrixXcd u = coinless_propagator(theta - pi / 2, pi / 2, n);
        const double unit = (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
        rows.push_back({{"n_sites", n}, {"spectral_distance", d}, {"split_exact", exact}, {"unitarity_defect", unit}});
        worst = std::max(worst, d);
    }
    emit_json(c, {{"config", {{"command", "coinless"}, {"theta", theta}, {"n_sites", o.n_sites}}},
                  {"results", {{"rings", rows}}},
                  {"metrics", {{"max_spectral_distance", worst}}}});
    return 0;
}

// ---------------------------------------------------------------- figure1

struct Figure1Opts
{
    Angle angle;
    double gamma = 0.125;
    std::size_t time = 100;
    std::size_t n_sites = 256;
};

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + p.string() + "'");
    }
    f << text;
}

int run_figure1(const Common& c, const Figure1Opts& o)
{
    const double theta = o.angle.resolve(0.25);
    if (!(theta > 0.0 && theta < pi / 2)) {
        throw UsageError("figure1: theta must lie in (0, pi/2)");
    }
    if (!(o.gamma > 0.0)) {
        throw UsageError("figure1: --gamma must be positive");
    }
    const std::size_t n = parse_sites(o.n_sites, "figure1");
    guard(c, n, std::max(std::cos(theta), 2.0 * o.gamma), double(o.time), "figure1");
    const std::filesystem::path dir = c.output.empty() ? std::filesystem::path("figure1") : std::filesystem::path(c.output);
    std::filesystem::create_directories(dir);

    io::DensitySurface a;
    io::DensitySurface b;
    io::DensitySurface cc;
    const SpinorField start = initial_symmetric_entangled(n);
    const ScalarField origin = delta_scalar(n);
    SpinorField walk = start;
    for (std::size_t t = 0; t <= o.time; ++t) {
        const double td = double(t);
        a.times.push_back(td);
        b.times.push_back(td);
        cc.times.push_back(td);
        a.rows.push_back(density(walk));
        b.rows.push_back(density(limit_pair_evolve(start, {o.gamma, td, n})));
        cc.rows.push_back(density(ctqw_evolve(origin, {o.gamma, td, n})));
        walk = dtqw_step(walk, theta);
    }
    const std::pair<const char*, const io::DensitySurface*> panels[] = {
        {"panel_a", &a}, {"panel_b", &b}, {"panel_c", &cc}};
    const char* titles[] = {"(a) coined walk", "(b) continuous-time limit pair", "(c) scalar continuous-time walk"};
    for (std::size_t i = 0; i < 3; ++i) {
        std::ostringstream csv;
        io::write_csv(csv, *panels[i].second);
        write_file(dir / (std::string(panels[i].first) + ".csv"), csv.str());
        std::ostringstream svg;
        io::write_svg(svg, *panels[i].second, titles[i]);
        write_file(dir / (std::string(panels[i].first) + ".svg"), svg.str());
    }

    const ProbabilityField& ra = a.rows.back();
    const ProbabilityField& rb = b.rows.back();
    const ProbabilityField& rc = cc.rows.back();
    double vmax = 0.0;
    const MomentumGrid grid(2048);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        vmax = std::max(vmax, std::abs(dispersion(grid[m], theta).group_velocity));
    }
    std::int64_t peak_pos = 1;
    std::int64_t peak_neg = -1;
    const auto half = static_cast<std::int64_t>(n / 2);
    for (std::int64_t k = 1; k < half; ++k) {
        if (ra(k) > ra(peak_pos)) {
            peak_pos = k;
        }
        if (ra(-k) > ra(peak_neg)) {
            peak_neg = -k;
        }
    }
    const json summary = {
        {"config",
         {{"command", "figure1"},
          {"theta", theta},
          {"cos_theta", std::cos(theta)},
          {"gamma", o.gamma},
          {"time", o.time},
          {"n_sites", n},
          {"initial_a_b", "symmetric-entangled"},
          {"initial_c", "delta"},
          {"time_sampling", "integer t and tau"},
          {"color_map", "grayscale, lightness sqrt(rho / rho_max) per panel"}}},
        {"results",
         {{"files",
           {"panel_a.csv", "panel_a.svg", "panel_b.csv", "panel_b.svg", "panel_c.csv", "panel_c.svg"}},
          {"peak_positions_a", {peak_neg, peak_pos}},
          {"light_cone", std::cos(theta) * double(o.time)}}},
        {"metrics",
         {{"l1_ab", l1_distance(ra, rb)},
          {"l1_bc", l1_distance(rb, rc)},
          {"rho_c_origin", rc(0)},
          {"max_group_velocity", vmax}}}};
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- config files

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// key=value lines become "--key value" arguments; '#' starts a comment.
// The key "command" names the subcommand when the command line does not.
std::vector<std::string> read_config(const std::string& path, std::string& command)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file '" + path + "'");
    }
    std::vector<std::string> args;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find_first_of(" \t") != std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": bad key '" + key + "'");
        }
        if (key == "command") {
            command = value;
            continue;
        }
        if (key == "config") {
            throw UsageError(path + ":" + std::to_string(line_no) + ": nested config files are not supported");
        }
        std::string flag = "--";
        for (char ch : key) {
            flag += ch == '_' ? '-' : ch;
        }
        if (value == "true") {
            args.push_back(flag);
        } else if (value != "false") {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

const std::vector<std::string> subcommand_names = {"dtqw",   "ctqw",     "limit-scan", "bch-scan", "classical",
                                                   "weaklimit", "walk3d", "coinless",   "figure1"};

bool is_subcommand(const std::string& s)
{
    return std::find(subcommand_names.begin(), subcommand_names.end(), s) != subcommand_names.end();
}

// Rebuilds the argument list as: subcommand, config-file flags, command-line
// flags. Later flags win, so the command line overrides the file.
std::vector<std::string> expand_arguments(int argc, char** argv)
{
    std::vector<std::string> rest;
    std::string config;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config") {
            if (i + 1 >= argc) {
                throw UsageError("--config needs a file name");
            }
            config = argv[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config = a.substr(9);
        } else {
            rest.push_back(a);
        }
    }
    if (config.empty()) {
        return rest;
    }
    std::string command;
    const std::vector<std::string> raw = read_config(config, command);
    // a key given on the command line replaces the file's entry outright
    std::vector<std::string> given;
    for (const auto& a : rest) {
        if (a.rfind("--", 0) == 0) {
            given.push_back(a.substr(0, a.find('=')));
        } else if (a.rfind("-o", 0) == 0) {
            given.emplace_back("--output");
        }
    }
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const bool has_value = i + 1 < raw.size() && raw[i + 1].rfind("--", 0) != 0;
        const bool overridden = std::find(given.begin(), given.end(), raw[i]) != given.end();
        if (!overridden) {
            from_file.push_back(raw[i]);
            if (has_value) {
                from_file.push_back(raw[i + 1]);
            }
        }
        i += has_value ? 1 : 0;
    }
    std::vector<std::string> out;
    auto sub = std::find_if(rest.begin(), rest.end(), is_subcommand);
    if (sub != rest.end()) {
        out.assign(rest.begin(), sub + 1);
        out.insert(out.end(), from_file.begin(), from_file.end());
        out.insert(out.end(), sub + 1, rest.end());
    } else {
        if (command.empty()) {
            throw UsageError("no subcommand on the command line or in the config file");
        }
        if (!is_subcommand(command)) {
            throw UsageError("config file names unknown subcommand '" + command + "'");
        }
        out = rest;
        out.push_back(command);
        out.insert(out.end(), from_file.begin(), from_file.end());
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quantum and classical walks on a periodic lattice"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    common.format = "";
    app.add_option("--format", common.format, "output format: csv, json or svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--output,-o", common.output, "output file (directory for figure1); stdout if omitted");
    app.add_flag("--strict", common.strict, "treat window-guard violations as errors (exit code 2)");
    std::string config_note;
    app.add_option("--config", config_note, "key=value file whose entries act as flags");

    DtqwOpts dtqw;
    auto* c_dtqw = app.add_subcommand("dtqw", "coined walk: evolve a spinor state");
    add_angle(c_dtqw, dtqw.angle);
    c_dtqw->add_option("--steps,--tau", dtqw.steps, "number of steps");
    c_dtqw->add_option("--n-sites", dtqw.n_sites, "ring size (even)");
    c_dtqw->add_option("--initial", dtqw.initial, "symmetric-entangled, delta or a spinor CSV file");
    c_dtqw->add_option("--method", dtqw.method, "real or momentum");

    CtqwOpts ctqw;
    auto* c_ctqw = app.add_subcommand("ctqw", "continuous-time walk: scalar walk or the limit pair system");
    c_ctqw->add_option("--system", ctqw.system, "scalar or pair");
    c_ctqw->add_option("--gamma", ctqw.gamma, "hopping rate");
    c_ctqw->add_option("--time", ctqw.time, "evolution time");
    c_ctqw->add_option("--n-sites", ctqw.n_sites, "ring size (even)");
    c_ctqw->add_option("--initial", ctqw.initial, "delta, symmetric-entangled (pair) or a state CSV file");

    LimitScanOpts scan;
    auto* c_scan = app.add_subcommand("limit-scan", "distance between the coined walk and its continuous limit");
    c_scan->add_option("--gamma", scan.gamma, "hopping rate");
    c_scan->add_option("--time", scan.time, "evolution time");
    c_scan->add_option("--tau", scan.taus, "even step counts")->delimiter(',');
    c_scan->add_option("--n-sites", scan.n_sites, "ring size (even)");
    c_scan->add_option("--initial", scan.initial, "symmetric-entangled, delta or a spinor CSV file");

    BchOpts bch;
    auto* c_bch = app.add_subcommand("bch-scan", "residual of the first-order two-step formula");
    c_bch->add_option("--delta", bch.deltas, "delta values")->delimiter(',');
    c_bch->add_option("--k", bch.ks, "momenta (default: uniform grid)")->delimiter(',');
    c_bch->add_option("--k-points", bch.k_points, "size of the default momentum grid");

    ClassicalOpts cls;
    auto* c_cls = app.add_subcommand("classical", "persistent random walk and its continuous-time limit");
    c_cls->add_option("--mode", cls.mode, "persistent, two-step, limit, compare or diffusion-check");
    c_cls->add_option("--alpha", cls.alpha, "persistence probability");
    c_cls->add_option("--steps", cls.steps, "number of persistent steps");
    c_cls->add_option("--gamma", cls.gamma, "rate");
    c_cls->add_option("--time", cls.time, "evolution time");
    c_cls->add_option("--dt", cls.dt, "time step of the discrete walk in compare mode");
    c_cls->add_option("--n-sites", cls.n_sites, "ring size (even)");

    WeakOpts weak;
    auto* c_weak = app.add_subcommand("weaklimit", "compare a simulated density with its long-time law");
    c_weak->add_option("--walk", weak.walk, "ctqw or dtqw");
    c_weak->add_option("--gamma", weak.gamma, "hopping rate (ctqw)");
    c_weak->add_option("--time", weak.time, "time (ctqw)");
    add_angle(c_weak, weak.angle);
    c_weak->add_option("--tau,--steps", weak.tau, "steps (dtqw)");
    c_weak->add_option("--interior", weak.interior, "interior fraction of the light cone");
    c_weak->add_option("--bins", weak.bins, "number of bins");
    c_weak->add_option("--n-sites", weak.n_sites, "ring size (even)");

    Walk3dOpts w3;
    auto* c_w3 = app.add_subcommand("walk3d", "four-component walk on the cubic lattice");
    c_w3->add_option("--mode", w3.mode, "defect, propagator, hamiltonian, generator or ctqw");
    c_w3->add_option("--ordering", w3.ordering, "naive or symmetric");
    c_w3->add_option("--k", w3.k, "kx,ky,kz")->delimiter(',');
    c_w3->add_option("--theta", w3.theta, "coin angle (propagator mode)");
    c_w3->add_option("--delta", w3.delta, "pi/2 - theta (generator mode)");
    c_w3->add_option("--gamma", w3.gamma, "hopping rate");
    c_w3->add_option("--time", w3.time, "time (ctqw mode)");
    c_w3->add_option("--n-sites", w3.n_sites, "ring size per axis (ctqw mode)");

    CoinlessOpts coin;
    auto* c_coin = app.add_subcommand("coinless", "spectral check of the even/odd coinless walk");
    add_angle(c_coin, coin.angle);
    c_coin->add_option("--n-sites", coin.n_sites, "ring sizes")->delimiter(',');

    Figure1Opts fig;
    auto* c_fig = app.add_subcommand("figure1", "density surfaces of the three walks at matched speed");
    add_angle(c_fig, fig.angle);
    c_fig->add_option("--gamma", fig.gamma, "hopping rate");
    c_fig->add_option("--time,--tau", fig.time, "final integer time");
    c_fig->add_option("--n-sites", fig.n_sites, "ring size (even)");

    try {
        std::vector<std::string> args = expand_arguments(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        auto pick = [&](const char* fallback) {
            if (common.format.empty()) {
                common.format = fallback;
            }
        };
        if (c_dtqw->parsed()) {
            pick("csv");
            return run_dtqw(common, dtqw);
        }
        if (c_ctqw->parsed()) {
            pick("csv");
            return run_ctqw(common, ctqw);
        }
        if (c_scan->parsed()) {
            pick("json");
            return run_limit_scan(common, scan);
        }
        if (c_bch->parsed()) {
            pick("json");
            return run_bch_scan(common, bch);
        }
        if (c_cls->parsed()) {
            pick("json");
            return run_classical(common, cls);
        }
        if (c_weak->parsed()) {
            pick("json");
            return run_weaklimit(common, weak);
        }
        if (c_w3->parsed()) {
            pick("json");
            return run_walk3d(common, w3);
        }
        if (c_coin->parsed()) {
            pick("json");
            return run_coinless(common, coin);
        }
        if (c_fig->parsed()) {
            return run_figure1(common, fig);
        }
    } catch (const GuardViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_guard;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
