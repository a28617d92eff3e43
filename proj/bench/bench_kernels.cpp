// Serial reference against the OpenMP kernels. Prints one line per kernel:
// name, threads, serial ms, parallel ms, speedup, max |difference|.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <vector>

#include "strip/kernels.hpp"
#include "strip/mode_propagator.hpp"

using namespace strip;
using std::numbers::pi;

namespace {

double best_ms(const std::function<void()>& f, int reps = 5)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void report(const char* name, double serial, double parallel, double diff)
{
    std::printf("%-14s threads=%d serial=%9.3f ms parallel=%9.3f ms speedup=%5.2f diff=%.1e\n", name,
                kernels::max_threads(), serial, parallel, serial / parallel, diff);
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

int main()
{
    std::vector<double> coeffs(2000);
    for (std::size_t n = 0; n < coeffs.size(); ++n) coeffs[n] = 1.0 / ((n + 1.0) * (n + 1.0));
    const auto x = linspace(0.0, pi, 4001);
    const auto xg = linspace(0.0, pi, 201);

    {
        std::vector<double> a(x.size()), b(x.size());
        const double s = best_ms([&] { kernels::sine_sum_serial(coeffs, pi, x, a); });
        const double p = best_ms([&] { kernels::sine_sum(coeffs, pi, x, b); });
        report("sine_sum", s, p, max_diff(a, b));
    }
    {
        std::vector<double> a(xg.size() * xg.size()), b(a.size());
        const double s = best_ms([&] { kernels::pair_grid_serial(coeffs, pi, xg, xg, a); });
        const double p = best_ms([&] { kernels::pair_grid(coeffs, pi, xg, xg, b); });
        report("pair_grid", s, p, max_diff(a, b));
    }
    {
        std::vector<double> w(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) w[i] = std::exp(-x[i]) * x[i] * (pi - x[i]);
        std::vector<double> a(2000), b(2000);
        const double s = best_ms([&] { kernels::sine_project_serial(w, x, pi, a); });
        const double p = best_ms([&] { kernels::sine_project(w, x, pi, b); });
        report("sine_project", s, p, max_diff(a, b));
    }
    {
        const std::size_t modes = 256, steps = 2000;
        const ModePropagator prop(Params{1.0, 1.0, 1.0, pi}, modes, 0.005);
        std::vector<double> y0(modes), v0(modes), f((steps + 1) * modes);
        for (std::size_t n = 0; n < modes; ++n) y0[n] = 1.0 / (n + 1.0);
        for (std::size_t j = 0; j <= steps; ++j)
            for (std::size_t n = 0; n < modes; ++n) f[j * modes + n] = std::cos(0.01 * j) / (n + 1.0);
        ModalTrajectory a, b;
        const double s = best_ms([&] { a = prop.run_serial(y0, v0, f, steps); }, 3);
        const double p = best_ms([&] { b = prop.run(y0, v0, f, steps); }, 3);
        report("propagator", s, p, std::max(max_diff(a.y, b.y), max_diff(a.ydot, b.ydot)));
    }
    return 0;
}
