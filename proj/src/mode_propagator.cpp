#include "strip/mode_propagator.hpp"

#include <algorithm>
#include <cmath>

#include "strip/errors.hpp"

namespace strip {
namespace {

// 8-point Gauss-Legendre on [-1,1], positive half.
constexpr double kGaussX[4] = {0.18343464249564978, 0.525532409916329, 0.7966664774136267, 0.9602898564975362};
constexpr double kGaussW[4] = {0.36268378337836177, 0.31370664587788705, 0.22238103445337434, 0.10122853629037669};

// int_0^dt e^{-r u} u^k du, k = 0..2
void exp_moments(double r, double dt, double out[3])
{
    const double x = r * dt;
    if (x < 1.0) {
        for (int k = 0; k < 3; ++k) {
            double term = 1.0, acc = 0.0;
            for (int j = 0; j < 40; ++j) {
                acc += term / static_cast<double>(k + j + 1);
                term *= -x / static_cast<double>(j + 1);
                if (std::abs(term) < 1e-18) break;
            }
            out[k] = acc * std::pow(dt, k + 1);
        }
        return;
    }
    const double e = std::exp(-x);
    out[0] = -std::expm1(-x) / r;
    out[1] = (1.0 - e * (1.0 + x)) / (r * r);
    out[2] = 2.0 * (1.0 - e * (1.0 + x + 0.5 * x * x)) / (r * r * r);
}

// int_0^dt H(u) u^k du from the mode equation integrated against u^k.
void ode_moments(const ModeParams& m, double dt, double out[3])
{
    const double H = kernel_eval(m, dt);
    const double Hd = kernel_dt_eval(m, dt);
    const double D = displacement_kernel(m, dt);
    const double b2 = m.b * m.b;
    const double h = m.h;
    out[0] = (1.0 - D) / b2;
    out[1] = (H - dt * Hd - 2.0 * h * dt * H + 2.0 * h * out[0]) / b2;
    out[2] = (-dt * dt * Hd + 2.0 * dt * H - 2.0 * out[0] - 2.0 * h * dt * dt * H + 4.0 * h * out[1]) / b2;
}

}  // namespace

void kernel_moments(const ModeParams& m, double dt, double out[3])
{
    if (!(dt > 0.0)) throw ParameterError("step must be positive");
    const double stiff = m.fast_rate * dt;
    if (stiff <= 64.0) {
        const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * stiff)));
        const double w = dt / panels;
        out[0] = out[1] = out[2] = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * w;
            for (int g = 0; g < 4; ++g) {
                for (double side : {-1.0, 1.0}) {
                    const double u = mid + side * 0.5 * w * kGaussX[g];
                    const double wt = 0.5 * w * kGaussW[g] * kernel_eval(m, u);
                    const double r = dt - u;
                    out[0] += wt;
                    out[1] += wt * r;
                    out[2] += wt * r * r;
                }
            }
        }
        return;
    }
    double mk[3];
    if (m.regime == Regime::Overdamped && m.omega >= 0.05 * m.h) {
        double es[3], ef[3];
        exp_moments(m.slow_rate, dt, es);
        exp_moments(m.fast_rate, dt, ef);
        for (int k = 0; k < 3; ++k) mk[k] = (es[k] - ef[k]) / (2.0 * m.omega);
    } else {
        ode_moments(m, dt, mk);
    }
    out[0] = mk[0];
    out[1] = dt * mk[0] - mk[1];
    out[2] = dt * dt * mk[0] - 2.0 * dt * mk[1] + mk[2];
}

ModePropagator::ModePropagator(const Params& p, std::size_t modes, double dt) : modes_(modes), dt_(dt), w_(modes)
{
    p.validate();
    if (!(dt > 0.0 && std::isfinite(dt))) throw ParameterError("time step must be positive");
    for (std::size_t i = 0; i < modes; ++i) {
        const ModeParams m = mode_params(p, static_cast<std::int64_t>(i + 1));
        Weights& w = w_[i];
        w.h = kernel_eval(m, dt);
        w.hd = kernel_dt_eval(m, dt);
        w.d = displacement_kernel(m, dt);
        w.b2 = m.b * m.b;

        double I[3];
        kernel_moments(m, dt, I);
        // Moments of H' follow by parts: J0 = H(dt), Jk = k I_{k-1}.
        const double J[3] = {w.h, I[0], 2.0 * I[1]};
        const double d1 = 1.0 / (2.0 * dt), d2 = 1.0 / (2.0 * dt * dt);
        auto centred = [&](const double* M, double* out) {
            out[0] = -M[1] * d1 + M[2] * d2;
            out[1] = M[0] - 2.0 * M[2] * d2;
            out[2] = M[1] * d1 + M[2] * d2;
        };
        auto forward = [&](const double* M, double* out) {
            out[0] = M[0] - 3.0 * M[1] * d1 + M[2] * d2;
            out[1] = 4.0 * M[1] * d1 - 2.0 * M[2] * d2;
            out[2] = -M[1] * d1 + M[2] * d2;
        };
        centred(I, w.ih);
        centred(J, w.idh);
        forward(I, w.fh);
        forward(J, w.fdh);
    }
}

void ModePropagator::run_mode(std::size_t n, std::span<const double> y0, std::span<const double> ydot0,
                              std::span<const double> forcing, std::size_t steps, ModalTrajectory& out) const
{
    const Weights& w = w_[n];
    const std::size_t M = modes_;
    double y = y0[n], v = ydot0[n];
    out.y[n] = y;
    out.ydot[n] = v;
    const bool forced = !forcing.empty();
    for (std::size_t j = 0; j < steps; ++j) {
        double fy = 0.0, fv = 0.0;
        if (forced) {
            if (j == 0) {
                const double f0 = forcing[n], f1 = forcing[M + n], f2 = forcing[2 * M + n];
                fy = w.fh[0] * f0 + w.fh[1] * f1 + w.fh[2] * f2;
                fv = w.fdh[0] * f0 + w.fdh[1] * f1 + w.fdh[2] * f2;
            } else {
                const double fm = forcing[(j - 1) * M + n], f0 = forcing[j * M + n], fp = forcing[(j + 1) * M + n];
                fy = w.ih[0] * fm + w.ih[1] * f0 + w.ih[2] * fp;
                fv = w.idh[0] * fm + w.idh[1] * f0 + w.idh[2] * fp;
            }
        }
        const double yn = w.d * y + w.h * v - fy;
        const double vn = -w.b2 * w.h * y + w.hd * v - fv;
        y = yn;
        v = vn;
        out.y[(j + 1) * M + n] = y;
        out.ydot[(j + 1) * M + n] = v;
    }
}

namespace {

void check_run_args(std::size_t modes, std::span<const double> y0, std::span<const double> ydot0,
                    std::span<const double> forcing, std::size_t steps)
{
    if (y0.size() != modes || ydot0.size() != modes) throw InputError("initial modal state has the wrong size");
    if (!forcing.empty()) {
        if (forcing.size() != (steps + 1) * modes) throw InputError("forcing samples have the wrong size");
        if (steps < 2) throw InputError("forced propagation needs at least two steps");
    }
}

ModalTrajectory make_trajectory(std::size_t modes, std::size_t steps)
{
    return {modes, steps, std::vector<double>((steps + 1) * modes), std::vector<double>((steps + 1) * modes)};
}

}  // namespace

ModalTrajectory ModePropagator::run(std::span<const double> y0, std::span<const double> ydot0,
                                    std::span<const double> forcing, std::size_t steps) const
{
    check_run_args(modes_, y0, ydot0, forcing, steps);
    ModalTrajectory out = make_trajectory(modes_, steps);
    const auto count = static_cast<std::ptrdiff_t>(modes_);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < count; ++n) run_mode(static_cast<std::size_t>(n), y0, ydot0, forcing, steps, out);
    return out;
}

ModalTrajectory ModePropagator::run_serial(std::span<const double> y0, std::span<const double> ydot0,
                                           std::span<const double> forcing, std::size_t steps) const
{
    check_run_args(modes_, y0, ydot0, forcing, steps);
    ModalTrajectory out = make_trajectory(modes_, steps);
    for (std::size_t n = 0; n < modes_; ++n) run_mode(n, y0, ydot0, forcing, steps, out);
    return out;
}

}  // namespace strip
