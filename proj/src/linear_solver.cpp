#include "strip/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "strip/errors.hpp"
#include "strip/kernels.hpp"

namespace strip {
namespace {

constexpr int kGradedPanels = 50;
constexpr std::size_t kGradedIntervals = 16;
constexpr std::size_t kUniformIntervals = 2;

void check_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
}

template <class F>
SineSpectrum map_modes(const Params& p, const SineSpectrum& s, double t, F&& factor)
{
    p.validate();
    check_time(t);
    SineSpectrum out = SineSpectrum::zero(s.l, s.size());
    for (std::size_t n = 1; n <= s.size(); ++n) {
        if (s.coeffs[n - 1] == 0.0) continue;
        out.coeffs[n - 1] = s.coeffs[n - 1] * factor(mode_params(p, static_cast<std::int64_t>(n)));
    }
    return out;
}

struct Panel {
    double a, b;
    std::size_t intervals;
};

// Uniform panels of two Simpson steps, then panels halving towards tau = t.
std::vector<Panel> build_panels(double t, const QuadratureConfig& q)
{
    const double step = std::min(q.max_step, t / static_cast<double>(q.min_intervals));
    const double graded = std::min(t, 16.0 * step);
    std::vector<Panel> panels;
    const double uniform_end = t - graded;
    if (uniform_end > 0.0) {
        const auto count = static_cast<std::size_t>(std::ceil(uniform_end / (kUniformIntervals * step) - 1e-9));
        for (std::size_t i = 0; i < count; ++i)
            panels.push_back({uniform_end * static_cast<double>(i) / count,
                              uniform_end * static_cast<double>(i + 1) / count, kUniformIntervals});
    }
    double a = uniform_end;
    double width = graded;
    for (int k = 0; k < kGradedPanels; ++k) {
        width *= 0.5;
        const double b = t - width;
        panels.push_back({a, b, kGradedIntervals});
        a = b;
    }
    panels.push_back({a, t, kGradedIntervals});
    return panels;
}

// Nodes of the refined rule with weights of both the refined (fine) and the
// unrefined (coarse) composite Simpson rule.
struct NodeSet {
    std::vector<double> tau, fine, coarse;
};

NodeSet build_nodes(const std::vector<Panel>& panels, int level)
{
    NodeSet s;
    for (const Panel& pn : panels) {
        const std::size_t m = pn.intervals << (level + 1);
        const double h = (pn.b - pn.a) / static_cast<double>(m);
        for (std::size_t k = 0; k <= m; ++k) {
            const double wf = (k == 0 || k == m) ? h / 3.0 : (k % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
            double wc = 0.0;
            if (k % 2 == 0) {
                const std::size_t kc = k / 2, mc = m / 2;
                wc = (kc == 0 || kc == mc) ? 2.0 * h / 3.0 : (kc % 2 ? 8.0 * h / 3.0 : 4.0 * h / 3.0);
            }
            if (k == 0 && !s.tau.empty()) {
                s.fine.back() += wf;
                s.coarse.back() += wc;
                continue;
            }
            s.tau.push_back(k == m ? pn.b : pn.a + h * static_cast<double>(k));
            s.fine.push_back(wf);
            s.coarse.push_back(wc);
        }
    }
    return s;
}

}  // namespace

void LinearProblem::validate() const
{
    params.validate();
    if (!(horizon > 0.0 && std::isfinite(horizon))) throw ParameterError("horizon must be positive");
    const double tol = 1e-12 * params.l;
    for (const SineSpectrum* s : {&g0, &g1})
        if (s->size() > 0 && std::abs(s->l - params.l) > tol) throw InputError("data spectrum has a different strip length");
}

OutputGrid OutputGrid::uniform(double l, std::size_t nx, double horizon, std::size_t nt, bool with_dt)
{
    if (nx < 2 || nt < 1) throw InputError("output grid needs at least two x nodes and one t node");
    OutputGrid g;
    g.with_dt = with_dt;
    g.x.resize(nx);
    for (std::size_t i = 0; i < nx; ++i)
        g.x[i] = i + 1 == nx ? l : l * static_cast<double>(i) / static_cast<double>(nx - 1);
    g.t.resize(nt);
    for (std::size_t j = 0; j < nt; ++j)
        g.t[j] = nt == 1 ? horizon : (j + 1 == nt ? horizon : horizon * static_cast<double>(j) / static_cast<double>(nt - 1));
    return g;
}

SineSpectrum propagate_velocity(const Params& p, const SineSpectrum& g1, double t)
{
    return map_modes(p, g1, t, [t](const ModeParams& m) { return kernel_eval(m, t); });
}

SineSpectrum propagate_velocity_rate(const Params& p, const SineSpectrum& g1, double t)
{
    return map_modes(p, g1, t, [t](const ModeParams& m) { return kernel_dt_eval(m, t); });
}

SineSpectrum propagate_displacement(const Params& p, const SineSpectrum& g0, double t)
{
    return map_modes(p, g0, t, [t](const ModeParams& m) { return displacement_kernel(m, t); });
}

SineSpectrum propagate_displacement_rate(const Params& p, const SineSpectrum& g0, double t)
{
    return map_modes(p, g0, t, [t](const ModeParams& m) { return -m.b * m.b * kernel_eval(m, t); });
}

Convolution convolve(const Params& p, const SpectralSource& f, double t, const QuadratureConfig& quad, bool with_rate)
{
    p.validate();
    check_time(t);
    if (!(quad.max_step > 0.0) || quad.min_intervals < 2 || !(quad.tol > 0.0) || quad.max_refinements < 1)
        throw ParameterError("invalid quadrature configuration");
    Convolution out;
    if (!f) {
        out.value = out.rate = SineSpectrum::zero(p.l, 1);
        return out;
    }
    if (t == 0.0) {
        const std::size_t n = std::max<std::size_t>(1, f(0.0).size());
        out.value = out.rate = SineSpectrum::zero(p.l, n);
        return out;
    }

    const auto panels = build_panels(t, quad);
    for (int level = 0; level < quad.max_refinements; ++level) {
        const NodeSet nodes = build_nodes(panels, level);
        const std::size_t count = nodes.tau.size();
        std::vector<SineSpectrum> samples(count);
        std::size_t modes = 1;
        for (std::size_t i = 0; i < count; ++i) {
            samples[i] = f(nodes.tau[i]);
            modes = std::max(modes, samples[i].size());
        }

        std::vector<double> fine(modes, 0.0), coarse(modes, 0.0), fine_r(modes, 0.0), coarse_r(modes, 0.0);
        const auto nm = static_cast<std::ptrdiff_t>(modes);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t k = 0; k < nm; ++k) {
            const std::size_t n = static_cast<std::size_t>(k) + 1;
            bool any = false;
            for (const SineSpectrum& s : samples)
                if (s[n] != 0.0) {
                    any = true;
                    break;
                }
            if (!any) continue;
            const ModeParams m = mode_params(p, static_cast<std::int64_t>(n));
            double sf = 0.0, sc = 0.0, rf = 0.0, rc = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                const double fn = samples[i][n];
                if (fn == 0.0) continue;
                const double lag = std::max(0.0, t - nodes.tau[i]);
                const double kv = fn * kernel_eval(m, lag);
                sf += nodes.fine[i] * kv;
                sc += nodes.coarse[i] * kv;
                if (with_rate) {
                    const double kr = fn * kernel_dt_eval(m, lag);
                    rf += nodes.fine[i] * kr;
                    rc += nodes.coarse[i] * kr;
                }
            }
            fine[n - 1] = sf;
            coarse[n - 1] = sc;
            fine_r[n - 1] = rf;
            coarse_r[n - 1] = rc;
        }

        double est = 0.0;
        for (std::size_t n = 0; n < modes; ++n) {
            est = std::max(est, std::abs(fine[n] - coarse[n]) / 15.0);
            if (with_rate) est = std::max(est, std::abs(fine_r[n] - coarse_r[n]) / 15.0);
        }
        out.estimate = est;
        out.refinements = level + 1;
        if (est < quad.tol) {
            out.value = SineSpectrum::zero(p.l, modes);
            out.rate = SineSpectrum::zero(p.l, with_rate ? modes : 0);
            for (std::size_t n = 0; n < modes; ++n) {
                out.value.coeffs[n] = fine[n] + (fine[n] - coarse[n]) / 15.0;
                if (with_rate) out.rate.coeffs[n] = fine_r[n] + (fine_r[n] - coarse_r[n]) / 15.0;
            }
            return out;
        }
    }
    throw AccuracyError("convolution quadrature did not converge at t=" + number_text(t) +
                            " (estimate " + number_text(out.estimate) + ")",
                        out.estimate);
}

SineSpectrum forced_response(const Params& p, const SpectralSource& f, double t, const QuadratureConfig& quad)
{
    return convolve(p, f, t, quad, false).value;
}

Field solve_linear(const LinearProblem& prob, const OutputGrid& grid, const QuadratureConfig& quad)
{
    prob.validate();
    const Params& p = prob.params;
    for (double x : grid.x)
        if (!(x >= 0.0 && x <= p.l)) throw DomainError("output x outside [0,l]");
    for (double t : grid.t)
        if (!(t >= 0.0 && t <= prob.horizon * (1.0 + 1e-12))) throw DomainError("output t outside [0,T]");

    Field out;
    out.x = grid.x;
    out.t = grid.t;
    out.u.assign(grid.x.size() * grid.t.size(), 0.0);
    if (grid.with_dt) out.u_t.assign(out.u.size(), 0.0);

    const std::size_t nx = grid.x.size();
    for (std::size_t j = 0; j < grid.t.size(); ++j) {
        const double t = grid.t[j];
        SineSpectrum u = combine(1.0, propagate_velocity(p, prob.g1, t), 1.0, propagate_displacement(p, prob.g0, t));
        SineSpectrum ut;
        if (grid.with_dt)
            ut = combine(1.0, propagate_velocity_rate(p, prob.g1, t), 1.0,
                         propagate_displacement_rate(p, prob.g0, t));
        if (prob.f) {
            const Convolution conv = convolve(p, prob.f, t, quad, grid.with_dt);
            u = combine(1.0, u, -1.0, conv.value);
            if (grid.with_dt) ut = combine(1.0, ut, -1.0, conv.rate);
        }
        u.l = p.l;
        kernels::sine_sum(u.coeffs, p.l, grid.x, std::span<double>(out.u.data() + j * nx, nx));
        if (grid.with_dt) kernels::sine_sum(ut.coeffs, p.l, grid.x, std::span<double>(out.u_t.data() + j * nx, nx));
    }
    return out;
}

double residual(const Params& p, const Field& u, const PointSource& f)
{
    p.validate();
    const std::size_t nx = u.nx(), nt = u.nt();
    if (nx < 7 || nt < 7) throw InputError("residual needs at least 5 interior nodes on each axis");
    if (u.u.size() != nx * nt) throw InputError("field size does not match its grid");
    auto uniform = [](const std::vector<double>& v) {
        const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
        for (std::size_t i = 1; i < v.size(); ++i)
            if (std::abs(v[i] - v[i - 1] - h) > 1e-9 * h) return false;
        return true;
    };
    if (!uniform(u.x) || !uniform(u.t)) throw InputError("residual needs uniform grids");
    const double dx = (u.x.back() - u.x.front()) / static_cast<double>(nx - 1);
    const double dt = (u.t.back() - u.t.front()) / static_cast<double>(nt - 1);

    auto U = [&](std::size_t i, std::size_t j) { return u.at(i, j); };
    // w = eps u_t + c^2 u at time j, central in t
    auto w = [&](std::size_t i, std::size_t j) {
        return p.epsilon * (U(i, j + 1) - U(i, j - 1)) / (2.0 * dt) + p.c * p.c * U(i, j);
    };
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < nt; ++j) {
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double wxx = (w(i + 1, j) - 2.0 * w(i, j) + w(i - 1, j)) / (dx * dx);
            const double utt = (U(i, j + 1) - 2.0 * U(i, j) + U(i, j - 1)) / (dt * dt);
            const double ut = (U(i, j + 1) - U(i, j - 1)) / (2.0 * dt);
            const double lhs = wxx - utt - p.a * ut;
            const double rhs = f ? f(u.x[i], u.t[j]) : 0.0;
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

}  // namespace strip
