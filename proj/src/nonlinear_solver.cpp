#include "strip/nonlinear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "strip/errors.hpp"
#include "strip/green_kernel.hpp"
#include "strip/kernels.hpp"
#include "strip/mode_propagator.hpp"

namespace strip {
namespace {

double uniform_step(const std::vector<double>& v, const char* axis)
{
    if (v.size() < 3) throw InputError(std::string(axis) + " grid needs at least three nodes");
    const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i] - v[i - 1] - h) > 1e-9 * h) throw InputError(std::string(axis) + " grid is not uniform");
    return h;
}

void check_collocation(const Params& p, const Field& f)
{
    uniform_step(f.x, "x");
    uniform_step(f.t, "t");
    if (std::abs(f.x.front()) > 1e-12 * p.l || std::abs(f.x.back() - p.l) > 1e-12 * p.l)
        throw InputError("collocation grid must span [0,l]");
    if (f.u.size() != f.nx() * f.nt()) throw InputError("field size does not match its grid");
}

bool thread_safe(const SourceTerm& s)
{
    const auto k = s.kind();
    return k == "zero" || k == "sine-gordon" || k == "algebraic";
}

// Grid samples of F at the given times, transformed to sine coefficients.
std::vector<double> modal_forcing(const SourceTerm& F, const SineTransform& dst, const std::vector<double>& x,
                                  const double* times, std::size_t nt, const double* nodes)
{
    const std::size_t nx = x.size();
    const std::size_t modes = dst.modes();
    std::vector<double> out(nt * modes);
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(nt);
    const bool parallel = thread_safe(F);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t jj = 0; jj < count; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        try {
            std::vector<double> row(nx, 0.0);
            for (std::size_t i = 1; i + 1 < nx; ++i) row[i] = F(x[i], times[j], nodes[j * nx + i]);
            dst.forward(row, std::span<double>(out.data() + j * modes, modes));
        } catch (...) {
#pragma omp critical(strip_forcing_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<double> to_nodes(const SineTransform& dst, const std::vector<double>& modal, std::size_t nt)
{
    const std::size_t nx = dst.intervals() + 1;
    const std::size_t modes = dst.modes();
    std::vector<double> out(nt * nx);
    const auto count = static_cast<std::ptrdiff_t>(nt);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t jj = 0; jj < count; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        dst.inverse(std::span<const double>(modal.data() + j * modes, modes),
                    std::span<double>(out.data() + j * nx, nx));
    }
    return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        if (!std::isfinite(d)) throw NumericalError("non-finite value in Picard iterate");
        m = std::max(m, d);
    }
    return m;
}

std::vector<double> truncated(const SineSpectrum& s, std::size_t modes)
{
    std::vector<double> out(modes, 0.0);
    for (std::size_t n = 1; n <= modes; ++n) out[n - 1] = s[n];
    return out;
}

class WindowSolver {
public:
    WindowSolver(const NonlinearProblem& prob, const PicardConfig& cfg, std::size_t steps, double dt)
        : prob_(prob), cfg_(cfg), dst_(cfg.grid.nx - 1), prop_(prob.params, dst_.modes(), dt), steps_(steps)
    {
        const std::size_t nx = cfg.grid.nx;
        x_.resize(nx);
        for (std::size_t i = 0; i < nx; ++i)
            x_[i] = i + 1 == nx ? prob.params.l : prob.params.l * static_cast<double>(i) / static_cast<double>(nx - 1);
        t_.resize(steps + 1);
        for (std::size_t j = 0; j <= steps; ++j)
            t_[j] = j == steps ? prob.horizon : prob.horizon * static_cast<double>(j) / static_cast<double>(steps);
        u_.assign((steps + 1) * nx, 0.0);
        ut_.assign((steps + 1) * nx, 0.0);
    }

    std::size_t modes() const { return dst_.modes(); }

    void solve(std::size_t j0, std::size_t steps, std::vector<double> y0, std::vector<double> v0, int depth,
               std::vector<double>& y_end, std::vector<double>& v_end)
    {
        const bool splittable = steps >= 4 && depth < cfg_.max_depth;
        const ModalTrajectory lin = prop_.run(y0, v0, {}, steps);
        ModalTrajectory cur = lin;
        std::vector<double> nodes = to_nodes(dst_, cur.y, steps + 1);

        WindowReport w;
        w.t0 = t_[j0];
        w.t1 = t_[j0 + steps];
        for (int k = 1; k <= cfg_.max_iter; ++k) {
            ModalTrajectory next = lin;
            if (!prob_.source.is_zero()) {
                const auto forcing = modal_forcing(prob_.source, dst_, x_, t_.data() + j0, steps + 1, nodes.data());
                const std::vector<double> zero(modes(), 0.0);
                const ModalTrajectory conv = prop_.run(zero, zero, forcing, steps);
                // The propagator already carries the minus sign of -G * F.
                for (std::size_t i = 0; i < next.y.size(); ++i) {
                    next.y[i] += conv.y[i];
                    next.ydot[i] += conv.ydot[i];
                }
            }
            std::vector<double> next_nodes = to_nodes(dst_, next.y, steps + 1);
            const double r = sup_diff(next_nodes, nodes);
            w.residuals.push_back(r);
            w.iterations = k;
            cur = std::move(next);
            nodes = std::move(next_nodes);
            if (r <= cfg_.tol) {
                w.converged = true;
                break;
            }
            if (!splittable || k < 2) continue;
            const double prev = w.residuals[w.residuals.size() - 2];
            if (r >= prev) break;
            // Give up on this window early when the observed ratio cannot reach tol in time.
            if (k >= 3 && k + std::log(cfg_.tol / r) / std::log(r / prev) > cfg_.max_iter) break;
        }

        if (!w.converged && splittable) {
            ++abandoned_;
            const std::size_t left = steps / 2;
            std::vector<double> ym, vm;
            solve(j0, left, std::move(y0), std::move(v0), depth + 1, ym, vm);
            solve(j0 + left, steps - left, std::move(ym), std::move(vm), depth + 1, y_end, v_end);
            return;
        }

        const std::vector<double> rates = to_nodes(dst_, cur.ydot, steps + 1);
        const std::size_t nx = x_.size();
        std::copy(nodes.begin(), nodes.end(), u_.begin() + static_cast<std::ptrdiff_t>(j0 * nx));
        std::copy(rates.begin(), rates.end(), ut_.begin() + static_cast<std::ptrdiff_t>(j0 * nx));
        const std::size_t M = modes();
        y_end.assign(cur.y.end() - static_cast<std::ptrdiff_t>(M), cur.y.end());
        v_end.assign(cur.ydot.end() - static_cast<std::ptrdiff_t>(M), cur.ydot.end());
        windows_.push_back(std::move(w));
    }

    double linear_sup(const std::vector<double>& y0, const std::vector<double>& v0) const
    {
        const ModalTrajectory lin = prop_.run(y0, v0, {}, steps_);
        double m = 0.0;
        for (double v : to_nodes(dst_, lin.y, steps_ + 1)) m = std::max(m, std::abs(v));
        return m;
    }

    Field field() &&
    {
        return Field{std::move(x_), std::move(t_), std::move(u_), std::move(ut_)};
    }

    std::vector<WindowReport>& windows() { return windows_; }
    int abandoned() const { return abandoned_; }

private:
    const NonlinearProblem& prob_;
    const PicardConfig& cfg_;
    SineTransform dst_;
    ModePropagator prop_;
    std::size_t steps_;
    std::vector<double> x_, t_, u_, ut_;
    std::vector<WindowReport> windows_;
    int abandoned_ = 0;
};

}  // namespace

void PicardConfig::validate() const
{
    if (!(tol > 0.0)) throw ParameterError("Picard tolerance must be positive");
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
    if (grid.nx < 5) throw ParameterError("collocation grid needs at least 5 x nodes");
    if (!(grid.dt > 0.0 && std::isfinite(grid.dt))) throw ParameterError("collocation dt must be positive");
    if (max_depth < 0) throw ParameterError("max_depth must be >= 0");
}

Field picard_step(const Params& p, const Field& linear_part, const Field& u_prev, const SourceTerm& F,
                  const QuadratureConfig& quad)
{
    p.validate();
    check_collocation(p, u_prev);
    if (linear_part.x != u_prev.x || linear_part.t != u_prev.t || linear_part.u.size() != u_prev.u.size())
        throw InputError("linear part and previous iterate live on different grids");
    Field next = linear_part;
    if (F.is_zero()) return next;

    const std::size_t nx = u_prev.nx(), nt = u_prev.nt();
    const bool with_dt = linear_part.has_dt();
    const double t0 = u_prev.t.front();
    const auto* lin = std::get_if<LinearSource>(&F.variant());
    if (lin && lin->spectral) {
        const SpectralSource shifted = [f = lin->spectral, t0](double tau) { return f(t0 + tau); };
        for (std::size_t j = 0; j < nt; ++j) {
            const Convolution c = convolve(p, shifted, u_prev.t[j] - t0, quad, with_dt);
            std::vector<double> row(nx);
            kernels::sine_sum(c.value.coeffs, p.l, u_prev.x, row);
            for (std::size_t i = 0; i < nx; ++i) next.u[j * nx + i] -= row[i];
            if (with_dt) {
                kernels::sine_sum(c.rate.coeffs, p.l, u_prev.x, row);
                for (std::size_t i = 0; i < nx; ++i) next.u_t[j * nx + i] -= row[i];
            }
        }
        return next;
    }

    const double dt = (u_prev.t.back() - t0) / static_cast<double>(nt - 1);
    const SineTransform dst(nx - 1);
    const ModePropagator prop(p, dst.modes(), dt);
    const auto forcing = modal_forcing(F, dst, u_prev.x, u_prev.t.data(), nt, u_prev.u.data());
    const std::vector<double> zero(dst.modes(), 0.0);
    const ModalTrajectory conv = prop.run(zero, zero, forcing, nt - 1);
    const auto cu = to_nodes(dst, conv.y, nt);
    for (std::size_t i = 0; i < cu.size(); ++i) next.u[i] += cu[i];
    if (with_dt) {
        const auto cv = to_nodes(dst, conv.ydot, nt);
        for (std::size_t i = 0; i < cv.size(); ++i) next.u_t[i] += cv[i];
    }
    return next;
}

double sine_gordon_forcing_bound(const Params& p, double bias, double t_max)
{
    static constexpr double kTimes[] = {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0,
                                        4.0,  5.0, 7.0, 10.0, 15.0, 20.0, 30.0, 50.0, 100.0};
    std::vector<double> times;
    for (double t : kTimes)
        if (t <= t_max) times.push_back(t);
    if (times.empty()) times.push_back(t_max);
    const double M = integrated_green_envelope(p, times);
    return M * (1.0 + std::abs(bias)) / decay_constants(p).beta;
}

std::pair<Field, PicardReport> picard_solve(const NonlinearProblem& prob, const PicardConfig& cfg)
{
    prob.params.validate();
    cfg.validate();
    if (!(prob.horizon > 0.0 && std::isfinite(prob.horizon))) throw ParameterError("horizon must be positive");
    const auto steps = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(prob.horizon / cfg.grid.dt - 1e-9)));
    const double dt = prob.horizon / static_cast<double>(steps);

    WindowSolver solver(prob, cfg, steps, dt);
    const auto y0 = truncated(prob.g0, solver.modes());
    const auto v0 = truncated(prob.g1, solver.modes());

    PicardReport report;
    report.linear_sup = solver.linear_sup(y0, v0);
    std::vector<double> y_end, v_end;
    solver.solve(0, steps, y0, v0, 0, y_end, v_end);

    report.converged = true;
    for (WindowReport& w : solver.windows()) {
        report.iterations += w.iterations;
        report.residuals.insert(report.residuals.end(), w.residuals.begin(), w.residuals.end());
        report.converged = report.converged && w.converged;
        for (std::size_t k = 1; k < w.residuals.size(); ++k)
            if (w.residuals[k - 1] > 0.0)
                report.worst_ratio = std::max(report.worst_ratio, w.residuals[k] / w.residuals[k - 1]);
    }
    report.windows = std::move(solver.windows());
    report.abandoned_attempts = solver.abandoned();

    if (const auto* sg = std::get_if<SineGordonSource>(&prob.source.variant()))
        report.a_priori_bound = report.linear_sup + sine_gordon_forcing_bound(prob.params, sg->bias);
    else
        report.a_priori_bound = std::numeric_limits<double>::quiet_NaN();

    return {std::move(solver).field(), std::move(report)};
}

}  // namespace strip
