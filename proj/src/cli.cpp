#include "strip/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "strip/asymptotics.hpp"
#include "strip/data_functions.hpp"
#include "strip/errors.hpp"
#include "strip/fd_oracle.hpp"
#include "strip/green_kernel.hpp"
#include "strip/linear_solver.hpp"
#include "strip/nonlinear_solver.hpp"

#ifndef STRIP_VERSION
#define STRIP_VERSION "unknown"
#endif

namespace strip::cli {
namespace {

// ---------------------------------------------------------------- parsing

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, std::string_view s)
{
    s = trim(s);
    if (s == "pi") return std::numbers::pi;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
        throw UsageError(key + ": not a number: '" + std::string(s) + "'");
    return v;
}

long long to_integer(const std::string& key, std::string_view s)
{
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw UsageError(key + ": not an integer: '" + std::string(s) + "'");
    return v;
}

std::size_t to_count(const std::string& key, std::string_view s)
{
    const long long v = to_integer(key, s);
    if (v < 1) throw UsageError(key + " must be >= 1");
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, std::string_view s)
{
    s = trim(s);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw UsageError(key + ": expected true or false, got '" + std::string(s) + "'");
}

std::vector<double> to_list(const std::string& key, std::string_view s)
{
    std::vector<double> out;
    while (!s.empty()) {
        const auto comma = s.find(',');
        out.push_back(to_double(key, s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    if (out.empty()) throw UsageError(key + ": empty list");
    return out;
}

std::string text(std::string_view s) { return std::string(trim(s)); }

// ---------------------------------------------------------------- keys

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

struct Key {
    const char* name;
    const char* help;
    Setter set;
};

#define NUM(field) [](RunConfig& r, const std::string& k, const std::string& v) { r.field = to_double(k, v); }
#define CNT(field) [](RunConfig& r, const std::string& k, const std::string& v) { r.field = to_count(k, v); }
#define INT(field) \
    [](RunConfig& r, const std::string& k, const std::string& v) { r.field = static_cast<int>(to_integer(k, v)); }
#define STR(field) [](RunConfig& r, const std::string&, const std::string& v) { r.field = text(v); }
#define BOOL(field) [](RunConfig& r, const std::string& k, const std::string& v) { r.field = to_bool(k, v); }

const std::vector<Key> kCommon = {
    {"epsilon", "viscous coefficient", NUM(params.epsilon)},
    {"a", "damping", NUM(params.a)},
    {"c", "wave speed", NUM(params.c)},
    {"l", "strip length (accepts 'pi')", NUM(params.l)},
    {"output", "output file, '-' for stdout", STR(output)},
};

const std::vector<Key> kData = {
    {"g0", "initial displacement: built-in name", STR(g0.name)},
    {"g0-scale", "factor applied to g0", NUM(g0.scale)},
    {"g0-file", "initial displacement from two-column samples", STR(g0.file)},
    {"g1", "initial velocity: built-in name", STR(g1.name)},
    {"g1-scale", "factor applied to g1", NUM(g1.scale)},
    {"g1-file", "initial velocity from two-column samples", STR(g1.file)},
    {"horizon", "final time T", NUM(horizon)},
};

const std::vector<Key> kSource = {
    {"source", "zero | linear | sine-gordon | exp-decaying | algebraic", STR(source.kind)},
    {"f", "linear source profile (built-in name)", STR(source.profile)},
    {"f-scale", "linear source factor", NUM(source.scale)},
    {"f-time", "linear source time law: const | exp | algebraic", STR(source.time_law)},
    {"f-rate", "rate of the time law: e^{-r t} or (1+t)^{-r}", NUM(source.rate)},
    {"bias", "sine-gordon bias: F = sin u - bias", NUM(source.bias)},
    {"amplitude", "exp-decaying amplitude profile", STR(source.amplitude)},
    {"amp-scale", "exp-decaying amplitude factor", NUM(source.amp_scale)},
    {"mu", "exp-decaying rate", NUM(source.mu)},
    {"h-amp", "algebraic source amplitude", NUM(source.h)},
    {"k0", "algebraic source shift", NUM(source.k0)},
    {"alpha", "algebraic source exponent: (k0+t)^{-(1+alpha)}", NUM(source.alpha)},
};

const std::vector<Key> kSpectral = {
    {"modes", "retained sine modes", CNT(n_modes)},
    {"quad-tol", "convolution quadrature tolerance", NUM(quad_tol)},
    {"quad-max-step", "largest convolution quadrature step", NUM(quad_max_step)},
};

const std::vector<Key> kOutputGrid = {
    {"nx", "output nodes in x, ends included", CNT(nx)},
    {"nt", "output nodes in t, ends included", CNT(nt)},
    {"with-dt", "also write u_t", BOOL(with_dt)},
};

const std::vector<Key> kPicard = {
    {"tol", "Picard tolerance", NUM(picard_tol)},
    {"max-iter", "Picard iterations per window", INT(max_iter)},
    {"colloc-nx", "collocation nodes in x, ends included", CNT(colloc_nx)},
    {"dt", "collocation time step", NUM(colloc_dt)},
    {"max-depth", "window halvings allowed", INT(max_depth)},
};

const std::vector<Key> kOracle = {
    {"oracle-nx", "oracle interior nodes", CNT(oracle_nx)},
    {"oracle-dt", "oracle time step", NUM(oracle_dt)},
    {"theta", "theta of the time scheme", NUM(theta)},
    {"store-every", "keep every k-th oracle step", CNT(store_every)},
};

const std::vector<Key> kModes = {
    {"n", "number of table rows", CNT(table_modes)},
    {"k", "classification threshold in (0,1)", NUM(k)},
};

const std::vector<Key> kGreen = {
    {"times", "comma-separated positive times", [](RunConfig& r, const std::string& k, const std::string& v) {
         r.times = to_list(k, v);
     }},
    {"xi", "source point", NUM(xi)},
    {"nx", "nodes in x, ends included", CNT(nx)},
    {"series-tol", "series truncation tolerance", NUM(series_tol)},
};

const std::vector<Key> kDecay = {
    {"input", "CSV with columns x,t,u", STR(input)},
    {"window-start", "fit window start", NUM(window_start)},
    {"window-end", "fit window end; <= start picks the default window", NUM(window_end)},
    {"check-alpha", "if > 0, also test boundedness of sup|u| t^alpha", NUM(algebraic_alpha)},
    {"output", "output file, '-' for stdout", STR(output)},
};

#undef NUM
#undef CNT
#undef INT
#undef STR
#undef BOOL

struct Command {
    const char* name;
    const char* help;
    std::vector<const std::vector<Key>*> groups;
    std::vector<Key> extra;
};

const Key kOutEvery{"out-every", "write every k-th time level",
                    [](RunConfig& r, const std::string& k, const std::string& v) { r.out_every = to_count(k, v); }};
const Key kTolerance{"tolerance", "pass threshold; < 0 means twice the estimated oracle error",
                     [](RunConfig& r, const std::string& k, const std::string& v) { r.tolerance = to_double(k, v); }};

const std::vector<Command>& commands()
{
    static const std::vector<Command> cmds = {
        {"modes", "mode table and regime classification", {&kCommon, &kModes}, {}},
        {"green", "G, G_t and eps G_t + c^2 G on a grid", {&kCommon, &kGreen}, {}},
        {"solve-linear", "spectral solution of the linear problem", {&kCommon, &kData, &kSource, &kSpectral, &kOutputGrid},
         {}},
        {"solve-nonlinear", "Picard iteration on the collocation grid", {&kCommon, &kData, &kSource, &kPicard},
         {kOutEvery}},
        {"oracle", "finite-difference reference solution", {&kCommon, &kData, &kSource, &kOracle}, {}},
        {"verify", "spectral solution against the oracle", {&kCommon, &kData, &kSource, &kSpectral, &kPicard, &kOracle},
         {kTolerance}},
        {"decay-fit", "exponential decay rate of sup_x |u|", {&kDecay}, {}},
    };
    return cmds;
}

const Command* find_command(const std::string& name)
{
    for (const Command& c : commands())
        if (name == c.name) return &c;
    return nullptr;
}

std::vector<const Key*> keys_of(const Command& c)
{
    std::vector<const Key*> out;
    for (const auto* g : c.groups)
        for (const Key& k : *g) out.push_back(&k);
    for (const Key& k : c.extra) out.push_back(&k);
    return out;
}

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
}

// ---------------------------------------------------------------- output

std::string num(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

class Meta {
public:
    explicit Meta(const RunConfig& rc)
    {
        add("command", rc.command);
        add("version", STRIP_VERSION);
    }
    void add(const std::string& k, const std::string& v) { s_ += " " + k + "=" + v; }
    void add(const std::string& k, const char* v) { add(k, std::string(v)); }
    void add(const std::string& k, double v) { add(k, num(v)); }
    void add(const std::string& k, std::size_t v) { add(k, num(v)); }
    void add(const std::string& k, int v) { add(k, num(v)); }
    void add(const std::string& k, bool v) { add(k, std::string(v ? "true" : "false")); }
    std::string line() const { return "# meta:" + s_ + "\n"; }

private:
    std::string s_;
};

void add_params(Meta& m, const Params& p)
{
    m.add("epsilon", p.epsilon);
    m.add("a", p.a);
    m.add("c", p.c);
    m.add("l", p.l);
}

void add_data(Meta& m, const std::string& tag, const DataSpec& d)
{
    m.add(tag, d.file.empty() ? d.name : "file:" + d.file);
    m.add(tag + "_scale", d.scale);
}

void add_problem(Meta& m, const RunConfig& rc)
{
    add_params(m, rc.params);
    add_data(m, "g0", rc.g0);
    add_data(m, "g1", rc.g1);
    m.add("horizon", rc.horizon);
    const SourceSpec& s = rc.source;
    m.add("source", s.kind);
    if (s.kind == "linear") {
        m.add("f", s.profile);
        m.add("f_scale", s.scale);
        m.add("f_time", s.time_law);
        m.add("f_rate", s.rate);
    } else if (s.kind == "sine-gordon") {
        m.add("bias", s.bias);
    } else if (s.kind == "exp-decaying") {
        m.add("amplitude", s.amplitude);
        m.add("amp_scale", s.amp_scale);
        m.add("mu", s.mu);
    } else if (s.kind == "algebraic") {
        m.add("h", s.h);
        m.add("k0", s.k0);
        m.add("alpha", s.alpha);
    }
}

void write_field(std::string& out, const Field& f, std::size_t t_every = 1)
{
    const bool dt = f.has_dt();
    out += dt ? "x,t,u,u_t\n" : "x,t,u\n";
    for (std::size_t j = 0; j < f.nt(); ++j) {
        if (j % t_every != 0 && j + 1 != f.nt()) continue;
        for (std::size_t i = 0; i < f.nx(); ++i) {
            out += num(f.x[i]) + "," + num(f.t[j]) + "," + num(f.at(i, j));
            if (dt) out += "," + num(f.u_t[j * f.nx() + i]);
            out += "\n";
        }
    }
}

// ---------------------------------------------------------------- problem

SampledFunction read_samples(const std::string& path, double l)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open data file '" + path + "'");
    SampledFunction s;
    s.l = l;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;
        const auto sep = v.find_first_of(", \t");
        if (sep == std::string_view::npos) throw UsageError(path + ": expected two columns: '" + std::string(v) + "'");
        try {
            const double x = to_double(path, v.substr(0, sep));
            const double y = to_double(path, trim(v.substr(sep + 1)));
            s.nodes.push_back(x);
            s.values.push_back(y);
        } catch (const UsageError&) {
            if (!first) throw;  // a leading header line is allowed
        }
        first = false;
    }
    s.validate();
    return s;
}

SineSpectrum data_spectrum(const DataSpec& d, double l, std::size_t n_modes)
{
    if (d.file.empty()) return strip::data_spectrum(d.name, l, n_modes, d.scale);
    SineSpectrum s = analyze(read_samples(d.file, l), n_modes);
    for (double& c : s.coeffs) c *= d.scale;
    return s;
}

RealFunction data_function(const DataSpec& d, double l)
{
    if (d.file.empty()) return strip::data_function(d.name, l, d.scale);
    auto s = std::make_shared<SampledFunction>(read_samples(d.file, l));
    const double scale = d.scale;
    return [s, scale](double x) {
        const auto& xs = s->nodes;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return scale * s->values.front();
        if (it == xs.end()) return scale * s->values.back();
        const auto k = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
        return scale * ((1.0 - w) * s->values[k - 1] + w * s->values[k]);
    };
}

std::function<double(double)> time_law(const SourceSpec& s)
{
    const double r = s.rate;
    if (s.time_law == "const") return [](double) { return 1.0; };
    if (s.time_law == "exp") return [r](double t) { return std::exp(-r * t); };
    if (s.time_law == "algebraic") return [r](double t) { return std::pow(1.0 + t, -r); };
    throw UsageError("f-time must be const, exp or algebraic, got '" + s.time_law + "'");
}

/// n_modes fixes the length of the exact spectrum attached to linear sources.
SourceTerm build_source(const RunConfig& rc, std::size_t n_modes)
{
    const SourceSpec& s = rc.source;
    const double l = rc.params.l;
    if (s.kind == "zero") return SourceTerm::zero();
    if (s.kind == "linear") {
        const RealFunction profile = strip::data_function(s.profile, l, s.scale);
        const SineSpectrum shape = strip::data_spectrum(s.profile, l, n_modes, s.scale);
        const auto tau = time_law(s);
        return SourceTerm::linear([profile, tau](double x, double t) { return profile(x) * tau(t); },
                                  [shape, tau](double t) {
                                      SineSpectrum out = shape;
                                      const double w = tau(t);
                                      for (double& c : out.coeffs) c *= w;
                                      return out;
                                  });
    }
    if (s.kind == "sine-gordon") return SourceTerm::sine_gordon(s.bias);
    if (s.kind == "exp-decaying")
        return SourceTerm::exp_decaying(strip::data_function(s.amplitude, l, s.amp_scale), s.mu);
    if (s.kind == "algebraic") return SourceTerm::algebraic(s.h, s.k0, s.alpha, l);
    throw UsageError("unknown source '" + s.kind + "'; valid: zero, linear, sine-gordon, exp-decaying, algebraic");
}

OracleProblem oracle_problem(const RunConfig& rc)
{
    return OracleProblem{rc.params, data_function(rc.g0, rc.params.l), data_function(rc.g1, rc.params.l),
                         build_source(rc, 8), rc.horizon};
}

OracleConfig oracle_config(const RunConfig& rc)
{
    OracleConfig oc;
    oc.nx = rc.oracle_nx;
    oc.dt = rc.oracle_dt;
    oc.theta = rc.theta;
    oc.store_every = rc.store_every;
    return oc;
}

QuadratureConfig quad_config(const RunConfig& rc)
{
    QuadratureConfig q;
    q.tol = rc.quad_tol;
    q.max_step = rc.quad_max_step;
    return q;
}

PicardConfig picard_config(const RunConfig& rc)
{
    PicardConfig pc;
    pc.tol = rc.picard_tol;
    pc.max_iter = rc.max_iter;
    pc.grid.nx = rc.colloc_nx;
    pc.grid.dt = rc.colloc_dt;
    pc.max_depth = rc.max_depth;
    return pc;
}

NonlinearProblem nonlinear_problem(const RunConfig& rc)
{
    const std::size_t modes = rc.colloc_nx - 2;
    return NonlinearProblem{rc.params, data_spectrum(rc.g0, rc.params.l, modes),
                            data_spectrum(rc.g1, rc.params.l, modes), build_source(rc, modes), rc.horizon};
}

void add_picard_meta(Meta& m, const RunConfig& rc, const PicardReport& rep)
{
    m.add("tol", rc.picard_tol);
    m.add("max_iter", rc.max_iter);
    m.add("colloc_nx", rc.colloc_nx);
    m.add("dt", rc.colloc_dt);
    m.add("max_depth", rc.max_depth);
    m.add("converged", rep.converged);
    m.add("iterations", rep.iterations);
    m.add("windows", rep.windows.size());
    m.add("abandoned", rep.abandoned_attempts);
    m.add("worst_ratio", rep.worst_ratio);
    m.add("linear_sup", rep.linear_sup);
    if (std::isfinite(rep.a_priori_bound)) m.add("a_priori_bound", rep.a_priori_bound);
}

void add_oracle_meta(Meta& m, const RunConfig& rc)
{
    m.add("oracle_nx", rc.oracle_nx);
    m.add("oracle_dt", rc.oracle_dt);
    m.add("theta", rc.theta);
    m.add("store_every", rc.store_every);
}

// ---------------------------------------------------------------- commands

struct Outcome {
    std::string csv;
    int code = kExitOk;
    std::string message;
};

Outcome cmd_modes(const RunConfig& rc)
{
    const ModeClassification cls = classify_modes(rc.params, rc.k);
    Meta m(rc);
    add_params(m, rc.params);
    m.add("n", rc.table_modes);
    m.add("k", rc.k);
    m.add("nk", static_cast<std::size_t>(cls.nk));
    m.add("has_band", cls.has_band);
    if (cls.has_band) {
        m.add("n1_star", static_cast<std::size_t>(cls.n1_star));
        m.add("n2_star", static_cast<std::size_t>(cls.n2_star));
    }
    Outcome o;
    o.csv = m.line() + "n,gamma,b,h,omega,regime,slow_rate,fast_rate\n";
    for (std::size_t n = 1; n <= rc.table_modes; ++n) {
        const ModeParams mp = mode_params(rc.params, static_cast<std::int64_t>(n));
        o.csv += num(n) + "," + num(mp.gamma) + "," + num(mp.b) + "," + num(mp.h) + "," + num(mp.omega) + "," +
                 std::string(to_string(mp.regime)) + "," + num(mp.slow_rate) + "," + num(mp.fast_rate) + "\n";
    }
    return o;
}

Outcome cmd_green(const RunConfig& rc)
{
    const Params& p = rc.params;
    if (!(rc.xi >= 0.0 && rc.xi <= p.l)) throw UsageError("xi must lie in [0, l]");
    std::vector<double> x(rc.nx);
    for (std::size_t i = 0; i < rc.nx; ++i)
        x[i] = rc.nx == 1 ? 0.5 * p.l : (i + 1 == rc.nx ? p.l : p.l * static_cast<double>(i) / static_cast<double>(rc.nx - 1));
    const std::vector<double> xi{rc.xi};

    Meta m(rc);
    add_params(m, p);
    m.add("xi", rc.xi);
    m.add("series_tol", rc.series_tol);
    std::string rows;
    for (double t : rc.times) {
        std::vector<std::vector<double>> cols;
        for (Series s : {Series::Green, Series::GreenDt, Series::Flux}) {
            const TruncationPlan plan = plan_truncation(p, t, rc.series_tol, s);
            cols.push_back(series_grid(p, s, x, xi, t, plan.n_terms));
            if (s == Series::Green) m.add("terms_t" + num(t), static_cast<std::size_t>(plan.n_terms));
        }
        for (std::size_t i = 0; i < x.size(); ++i)
            rows += num(x[i]) + "," + num(rc.xi) + "," + num(t) + "," + num(cols[0][i]) + "," + num(cols[1][i]) + "," +
                    num(cols[2][i]) + "\n";
    }
    return {m.line() + "x,xi,t,G,G_t,flux\n" + rows, kExitOk, ""};
}

void require_linear(const SourceTerm& f)
{
    if (f.depends_on_u()) throw UsageError("this subcommand needs a u-independent source (zero, linear, algebraic)");
}

Outcome cmd_solve_linear(const RunConfig& rc)
{
    const Params& p = rc.params;
    const SourceTerm f = build_source(rc, rc.n_modes);
    require_linear(f);
    LinearProblem prob{p, data_spectrum(rc.g0, p.l, rc.n_modes), data_spectrum(rc.g1, p.l, rc.n_modes),
                       f.is_zero() ? SpectralSource{} : f.spectral(p.l, rc.n_modes), rc.horizon};
    const Field u = solve_linear(prob, OutputGrid::uniform(p.l, rc.nx, rc.horizon, rc.nt, rc.with_dt), quad_config(rc));
    Meta m(rc);
    add_problem(m, rc);
    m.add("modes", rc.n_modes);
    m.add("quad_tol", rc.quad_tol);
    m.add("quad_max_step", rc.quad_max_step);
    Outcome o;
    o.csv = m.line();
    write_field(o.csv, u);
    return o;
}

Outcome cmd_solve_nonlinear(const RunConfig& rc)
{
    const auto [u, rep] = picard_solve(nonlinear_problem(rc), picard_config(rc));
    Meta m(rc);
    add_problem(m, rc);
    add_picard_meta(m, rc, rep);
    m.add("out_every", rc.out_every);
    Outcome o;
    o.csv = m.line();
    write_field(o.csv, u, rc.out_every);
    if (!rep.converged) {
        o.code = kExitNumerical;
        o.message = "Picard iteration did not converge on every window";
    }
    return o;
}

Outcome cmd_oracle(const RunConfig& rc)
{
    const Field u = oracle_solve(oracle_problem(rc), oracle_config(rc));
    Meta m(rc);
    add_problem(m, rc);
    add_oracle_meta(m, rc);
    Outcome o;
    o.csv = m.line();
    write_field(o.csv, u);
    return o;
}

/// Index of the time in ts that matches t, or npos.
std::size_t find_time(const std::vector<double>& ts, double t, double horizon)
{
    const double tol = 1e-9 * std::max(1.0, horizon);
    const auto it = std::lower_bound(ts.begin(), ts.end(), t - tol);
    if (it != ts.end() && std::abs(*it - t) <= tol) return static_cast<std::size_t>(it - ts.begin());
    return std::string::npos;
}

/// max over common times of max_i |a(i * ra, ja) - b(i * rb, jb)| on the coarse nodes of b.
struct Disagreement {
    std::vector<double> t;
    std::vector<double> diff;
    double max = 0.0;
};

Disagreement compare(const Field& fine, const Field& coarse, double horizon)
{
    const std::size_t ratio = (fine.nx() - 1) / (coarse.nx() - 1);
    if (ratio * (coarse.nx() - 1) != fine.nx() - 1)
        throw UsageError("grids do not nest: " + num(fine.nx()) + " and " + num(coarse.nx()) + " x nodes");
    Disagreement d;
    for (std::size_t j = 0; j < coarse.nt(); ++j) {
        const std::size_t jf = find_time(fine.t, coarse.t[j], horizon);
        if (jf == std::string::npos) continue;
        double e = 0.0;
        for (std::size_t i = 0; i < coarse.nx(); ++i) e = std::max(e, std::abs(fine.at(i * ratio, jf) - coarse.at(i, j)));
        d.t.push_back(coarse.t[j]);
        d.diff.push_back(e);
        d.max = std::max(d.max, e);
    }
    if (d.t.size() < 2) throw UsageError("the two solutions share fewer than two output times");
    return d;
}

Outcome cmd_verify(const RunConfig& rc)
{
    const Params& p = rc.params;
    const OracleProblem oprob = oracle_problem(rc);
    OracleConfig oc = oracle_config(rc);
    const Field coarse = oracle_solve(oprob, oc);
    OracleConfig half = oc;
    half.nx = 2 * oc.nx + 1;
    half.dt = 0.5 * oc.dt;
    half.store_every = 2 * oc.store_every;
    const Field fine = oracle_solve(oprob, half);
    // Second order: u_h - u = (4/3) (u_h - u_{h/2}) to leading order.
    const double oracle_error = 4.0 / 3.0 * compare(fine, coarse, rc.horizon).max;

    Meta m(rc);
    add_problem(m, rc);
    add_oracle_meta(m, rc);
    Field spectral;
    if (!oprob.source.depends_on_u()) {
        const SourceTerm f = build_source(rc, rc.n_modes);
        LinearProblem prob{p, data_spectrum(rc.g0, p.l, rc.n_modes), data_spectrum(rc.g1, p.l, rc.n_modes),
                           f.is_zero() ? SpectralSource{} : f.spectral(p.l, rc.n_modes), rc.horizon};
        OutputGrid grid{coarse.x, coarse.t, false};
        spectral = solve_linear(prob, grid, quad_config(rc));
        m.add("spectral", std::string("linear"));
        m.add("modes", rc.n_modes);
        m.add("quad_tol", rc.quad_tol);
    } else {
        auto [u, rep] = picard_solve(nonlinear_problem(rc), picard_config(rc));
        if (!rep.converged) return {"", kExitNumerical, "Picard iteration did not converge on every window"};
        spectral = std::move(u);
        m.add("spectral", std::string("picard"));
        add_picard_meta(m, rc, rep);
    }
    const Disagreement d = compare(spectral, coarse, rc.horizon);
    const double tol = rc.tolerance >= 0.0 ? rc.tolerance : 2.0 * oracle_error;
    const bool pass = d.max <= tol;
    m.add("max_disagreement", d.max);
    m.add("oracle_error", oracle_error);
    m.add("tolerance", tol);
    m.add("result", std::string(pass ? "PASS" : "FAIL"));

    Outcome o;
    o.csv = m.line() + "t,disagreement\n";
    for (std::size_t j = 0; j < d.t.size(); ++j) o.csv += num(d.t[j]) + "," + num(d.diff[j]) + "\n";
    if (!pass) {
        o.code = kExitNumerical;
        o.message = "disagreement " + num(d.max) + " exceeds tolerance " + num(tol);
    }
    return o;
}

std::vector<Sample> read_sup_series(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input '" + path + "'");
    std::string line;
    std::vector<Sample> out;
    bool header = false;
    while (std::getline(in, line)) {
        const std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;
        if (!header) {
            if (v.substr(0, 6) != "x,t,u," && v != "x,t,u") throw UsageError(path + ": expected a header x,t,u");
            header = true;
            continue;
        }
        double cols[3];
        std::string_view rest = v;
        for (double& c : cols) {
            const auto comma = rest.find(',');
            c = to_double(path, rest.substr(0, comma));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        if (out.empty() || out.back().t != cols[1]) out.push_back({cols[1], 0.0});
        out.back().value = std::max(out.back().value, std::abs(cols[2]));
    }
    if (out.empty()) throw UsageError(path + ": no samples");
    return out;
}

Outcome cmd_decay_fit(const RunConfig& rc)
{
    if (rc.input.empty()) throw UsageError("decay-fit needs input");
    const auto series = read_sup_series(rc.input);
    const auto window = rc.window_end > rc.window_start ? std::pair{rc.window_start, rc.window_end}
                                                        : default_window(series.back().t);
    const DecayFit fit = decay_fit(series, window);
    Meta m(rc);
    m.add("input", rc.input);
    m.add("samples_total", series.size());
    std::string head = "rate,log_amplitude,max_residual,window_start,window_end,samples";
    std::string row = num(fit.rate) + "," + num(fit.log_amplitude) + "," + num(fit.max_residual) + "," +
                      num(fit.window.first) + "," + num(fit.window.second) + "," + num(fit.samples);
    if (rc.algebraic_alpha > 0.0) {
        const AlgebraicCheck chk = algebraic_decay_check(series, rc.algebraic_alpha);
        m.add("check_alpha", rc.algebraic_alpha);
        head += ",bounded,sup_of_product,tail_slope";
        row += std::string(",") + (chk.bounded ? "true" : "false") + "," + num(chk.sup_of_product) + "," +
               num(chk.tail_slope);
    }
    return {m.line() + head + "\n" + row + "\n", kExitOk, ""};
}

Outcome dispatch(const RunConfig& rc)
{
    const std::string& c = rc.command;
    if (c == "modes") return cmd_modes(rc);
    if (c == "green") return cmd_green(rc);
    if (c == "solve-linear") return cmd_solve_linear(rc);
    if (c == "solve-nonlinear") return cmd_solve_nonlinear(rc);
    if (c == "oracle") return cmd_oracle(rc);
    if (c == "verify") return cmd_verify(rc);
    return cmd_decay_fit(rc);
}

void apply_thread_cap()
{
    const char* env = std::getenv("STRIP_SOLVER_THREADS");
    if (!env || !*env) return;
    const long long n = to_integer("STRIP_SOLVER_THREADS", env);
    if (n < 1) throw UsageError("STRIP_SOLVER_THREADS must be >= 1");
    omp_set_num_threads(static_cast<int>(std::min<long long>(n, std::numeric_limits<int>::max())));
}

/// Expands `--config path` into `--key=value` arguments placed before the command-line flags.
std::vector<std::string> expand_config(const Command& cmd, std::vector<std::string> args)
{
    std::vector<std::string> flags;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            flags.push_back(args[i]);
        }
    }
    if (path.empty()) return flags;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config '" + path + "'");
    const auto cfg = parse_config(in);
    const auto valid = valid_keys(cmd.name);
    std::vector<std::string> out;
    for (const auto& [k, v] : cfg) {
        if (!std::binary_search(valid.begin(), valid.end(), k))
            throw UsageError("unknown key '" + k + "' in " + path + " for " + cmd.name + "; valid keys: " + join(valid));
        out.push_back("--" + k + "=" + v);
    }
    out.insert(out.end(), flags.begin(), flags.end());
    return out;
}

}  // namespace

void RunConfig::validate() const
{
    auto check_name = [&](const std::string& key, const std::string& n) {
        try {
            (void)strip::data_function(n, params.l);
        } catch (const InputError&) {
            throw UsageError(key + ": unknown data function '" + n + "'; known: " + join(data_function_names()));
        }
    };
    auto positive = [](const std::string& key, double v) {
        if (!(v > 0.0)) throw UsageError(key + " must be positive");
    };
    if (g0.file.empty()) check_name("g0", g0.name);
    if (g1.file.empty()) check_name("g1", g1.name);
    if (source.kind == "linear") check_name("f", source.profile);
    if (source.kind == "exp-decaying") check_name("amplitude", source.amplitude);
    positive("horizon", horizon);
    positive("quad-tol", quad_tol);
    positive("quad-max-step", quad_max_step);
    positive("tol", picard_tol);
    positive("dt", colloc_dt);
    positive("oracle-dt", oracle_dt);
    positive("series-tol", series_tol);
    if (max_iter < 1) throw UsageError("max-iter must be >= 1");
    if (max_depth < 0) throw UsageError("max-depth must be >= 0");
    if (colloc_nx < 5) throw UsageError("colloc-nx must be >= 5");
    if (nt < 2) throw UsageError("nt must be >= 2");
    if (!(k > 0.0 && k < 1.0)) throw UsageError("k must lie in (0,1)");
    for (double t : times) positive("times", t);
}

std::map<std::string, std::string> parse_config(std::istream& in)
{
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = line;
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos || trim(v.substr(0, eq)).empty())
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        out[std::string(trim(v.substr(0, eq)))] = std::string(trim(v.substr(eq + 1)));
    }
    return out;
}

std::vector<std::string> valid_keys(const std::string& command)
{
    const Command* c = find_command(command);
    if (!c) throw UsageError("unknown subcommand '" + command + "'");
    std::set<std::string> keys;
    for (const Key* k : keys_of(*c)) keys.insert(k->name);
    return {keys.begin(), keys.end()};
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    try {
        apply_thread_cap();
        const Command* cmd = args.empty() ? nullptr : find_command(args[0]);
        std::vector<std::string> rest;
        if (cmd) rest = expand_config(*cmd, {args.begin() + 1, args.end()});

        CLI::App app{"Green's function solver for the dissipative strip problem", "strip"};
        app.set_version_flag("--version", STRIP_VERSION);
        app.require_subcommand(1);
        std::map<std::string, std::map<std::string, std::string>> given;
        for (const Command& c : commands()) {
            CLI::App* sub = app.add_subcommand(c.name, c.help);
            sub->add_option("--config", "flat key = value file; flags override it");
            for (const Key* k : keys_of(c)) {
                if (sub->get_option_no_throw("--" + std::string(k->name))) continue;
                sub->add_option("--" + std::string(k->name), given[c.name][k->name], k->help)
                    ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
            }
        }
        std::vector<std::string> argv;
        if (cmd) {
            argv.push_back(cmd->name);
            argv.insert(argv.end(), rest.begin(), rest.end());
        } else {
            argv.assign(args.begin(), args.end());
        }
        std::reverse(argv.begin(), argv.end());
        try {
            app.parse(argv);
        } catch (const CLI::CallForHelp& e) {
            app.exit(e, out, err);
            return kExitOk;
        } catch (const CLI::CallForAllHelp& e) {
            app.exit(e, out, err);
            return kExitOk;
        } catch (const CLI::CallForVersion& e) {
            app.exit(e, out, err);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            app.exit(e, out, err);
            return kExitUsage;
        }

        RunConfig rc;
        rc.command = cmd->name;
        auto& values = given[cmd->name];
        for (const Key* k : keys_of(*cmd)) {
            CLI::App* sub = app.get_subcommand(cmd->name);
            if (sub->count("--" + std::string(k->name)) == 0) continue;
            k->set(rc, k->name, values[k->name]);
        }
        rc.validate();

        const Outcome o = dispatch(rc);
        if (rc.output == "-" || rc.output.empty()) {
            out << o.csv;
            out.flush();
        } else {
            std::ofstream f(rc.output, std::ios::binary);
            if (!f) throw UsageError("cannot write '" + rc.output + "'");
            f << o.csv;
            if (!f) throw UsageError("failed writing '" + rc.output + "'");
        }
        if (!o.message.empty()) err << "strip: " << o.message << "\n";
        return o.code;
    } catch (const UsageError& e) {
        err << "strip: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "strip: invalid parameter: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError& e) {
        err << "strip: invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "strip: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "strip: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace strip::cli
