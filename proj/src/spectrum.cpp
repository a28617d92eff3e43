#include "strip/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "strip/errors.hpp"
#include "strip/kernels.hpp"

namespace strip {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

void check_l(double l)
{
    if (!(std::isfinite(l) && l > 0.0)) throw ParameterError("strip length must be positive");
}

void warn_if_incompatible(double left, double right)
{
    const double worst = std::max(std::abs(left), std::abs(right));
    if (worst > kBoundaryWarnLevel)
        warn("data does not vanish at the strip ends (|g| = " + std::to_string(worst) +
             "); the sine series will not attain it uniformly");
}

}  // namespace

SineSpectrum SineSpectrum::single(double l, std::size_t mode, double amplitude)
{
    SineSpectrum s = zero(l, mode);
    s.coeffs[mode - 1] = amplitude;
    return s;
}

SineSpectrum combine(double alpha, const SineSpectrum& x, double beta, const SineSpectrum& y)
{
    SineSpectrum out = SineSpectrum::zero(x.l, std::max(x.size(), y.size()));
    for (std::size_t n = 1; n <= out.size(); ++n) out.coeffs[n - 1] = alpha * x[n] + beta * y[n];
    return out;
}

void SampledFunction::validate() const
{
    check_l(l);
    if (nodes.size() < 3) throw InputError("sampled function needs at least 3 nodes");
    if (nodes.size() != values.size()) throw InputError("node and value counts differ");
    const double tol = 1e-12 * l;
    if (std::abs(nodes.front()) > tol || std::abs(nodes.back() - l) > tol)
        throw InputError("nodes must start at 0 and end at l");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw InputError("nodes must be strictly increasing");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw InputError("g is undefined (non-finite) at node x=" + std::to_string(nodes[i]));
}

bool SampledFunction::uniform() const noexcept
{
    if (nodes.size() < 2) return false;
    const double step = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (std::abs(nodes[i] - nodes[i - 1] - step) > 1e-9 * step) return false;
    return true;
}

SampledFunction sample_uniform(const RealFunction& g, double l, std::size_t intervals)
{
    check_l(l);
    if (intervals < 2) throw InputError("need at least two intervals");
    SampledFunction s{l, std::vector<double>(intervals + 1), std::vector<double>(intervals + 1)};
    for (std::size_t j = 0; j <= intervals; ++j) {
        s.nodes[j] = j == intervals ? l : l * static_cast<double>(j) / static_cast<double>(intervals);
        s.values[j] = g(s.nodes[j]);
    }
    return s;
}

double boundary_mismatch(const SampledFunction& g)
{
    return std::max(std::abs(g.values.front()), std::abs(g.values.back()));
}

std::vector<double> simpson_weights(std::span<const double> x)
{
    const std::size_t m = x.size();
    if (m < 2) throw InputError("Simpson weights need at least two nodes");
    std::vector<double> w(m, 0.0);
    if (m == 2) {
        const double h = x[1] - x[0];
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    const std::size_t intervals = m - 1;
    const std::size_t paired = intervals % 2 == 0 ? intervals : intervals - 1;
    for (std::size_t i = 0; i + 2 <= paired; i += 2) {
        const double h0 = x[i + 1] - x[i];
        const double h1 = x[i + 2] - x[i + 1];
        const double hs = h0 + h1;
        w[i] += hs / 6.0 * (2.0 - h1 / h0);
        w[i + 1] += hs * hs * hs / (6.0 * h0 * h1);
        w[i + 2] += hs / 6.0 * (2.0 - h0 / h1);
    }
    if (paired != intervals) {
        // Quadratic through the last three nodes, integrated over the last interval only.
        const double h0 = x[m - 2] - x[m - 3];
        const double h1 = x[m - 1] - x[m - 2];
        w[m - 1] += (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
        w[m - 2] += (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
        w[m - 3] -= h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    }
    return w;
}

SineSpectrum analyze(const SampledFunction& g, std::size_t n_modes)
{
    g.validate();
    if (n_modes < 1) throw InputError("n_modes must be >= 1");
    warn_if_incompatible(g.values.front(), g.values.back());

    SineSpectrum out = SineSpectrum::zero(g.l, n_modes);
    const std::size_t intervals = g.nodes.size() - 1;
    if (g.uniform() && n_modes <= intervals - 1) {
        const SineTransform dst(intervals);
        std::vector<double> full(dst.modes());
        dst.forward(g.values, full);
        std::copy_n(full.begin(), n_modes, out.coeffs.begin());
        return out;
    }

    std::vector<double> w;
    if (g.uniform()) {
        // Trapezoid on the odd extension; the end samples multiply sin(0) and sin(n pi).
        w.assign(g.nodes.size(), g.l / static_cast<double>(intervals));
    } else {
        w = simpson_weights(g.nodes);
    }
    for (std::size_t j = 0; j < w.size(); ++j) w[j] *= 2.0 / g.l * g.values[j];
    kernels::sine_project(w, g.nodes, g.l, out.coeffs);
    return out;
}

SineSpectrum analyze(const RealFunction& g, double l, std::size_t n_modes)
{
    check_l(l);
    if (n_modes < 1) throw InputError("n_modes must be >= 1");
    std::size_t intervals = 1024;
    while (intervals < 8 * n_modes) intervals *= 2;
    return analyze(sample_uniform(g, l, intervals), n_modes);
}

double synthesize(const SineSpectrum& s, double x)
{
    const double xs[1] = {x};
    return synthesize(s, std::span<const double>(xs))[0];
}

std::vector<double> synthesize(const SineSpectrum& s, std::span<const double> x)
{
    check_l(s.l);
    for (double v : x)
        if (!(v >= 0.0 && v <= s.l)) throw DomainError("synthesis point x=" + std::to_string(v) + " outside [0,l]");
    std::vector<double> out(x.size());
    kernels::sine_sum(s.coeffs, s.l, x, out);
    return out;
}

SineSpectrum second_derivative(const SineSpectrum& s)
{
    SineSpectrum out = s;
    for (std::size_t n = 1; n <= out.size(); ++n) {
        const double gamma = static_cast<double>(n) * std::numbers::pi / s.l;
        out.coeffs[n - 1] *= -gamma * gamma;
    }
    return out;
}

struct SineTransform::Plan {
    fftw_plan plan = nullptr;
    ~Plan()
    {
        if (!plan) return;
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
};

SineTransform::SineTransform(std::size_t intervals) : intervals_(intervals), plan_(std::make_unique<Plan>())
{
    if (intervals < 2) throw InputError("sine transform needs at least two intervals");
    const int n = static_cast<int>(intervals - 1);
    std::vector<double> in(intervals - 1), out(intervals - 1);
    std::lock_guard lock(planner_mutex());
    plan_->plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_->plan) throw Error("FFTW failed to plan a sine transform");
}

SineTransform::~SineTransform() = default;

SineTransform::SineTransform(SineTransform&&) noexcept = default;
SineTransform& SineTransform::operator=(SineTransform&&) noexcept = default;

void SineTransform::forward(std::span<const double> node_values, std::span<double> coeffs) const
{
    if (node_values.size() != intervals_ + 1 || coeffs.size() != modes())
        throw InputError("sine transform size mismatch");
    // RODFT00 acts on the interior samples only.
    std::vector<double> in(node_values.begin() + 1, node_values.end() - 1);
    fftw_execute_r2r(plan_->plan, in.data(), coeffs.data());
    const double scale = 1.0 / static_cast<double>(intervals_);
    for (double& v : coeffs) v *= scale;
}

void SineTransform::inverse(std::span<const double> coeffs, std::span<double> node_values) const
{
    if (node_values.size() != intervals_ + 1 || coeffs.size() != modes())
        throw InputError("sine transform size mismatch");
    std::vector<double> in(coeffs.begin(), coeffs.end());
    fftw_execute_r2r(plan_->plan, in.data(), node_values.data() + 1);
    node_values.front() = 0.0;
    node_values.back() = 0.0;
    for (std::size_t j = 1; j < intervals_; ++j) node_values[j] *= 0.5;
}

void sine_transform_reference(std::span<const double> node_values, std::span<double> coeffs)
{
    const std::size_t intervals = node_values.size() - 1;
    const double m = static_cast<double>(intervals);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j < intervals; ++j)
            acc += node_values[j] * std::sin(std::numbers::pi * static_cast<double>(j * (k + 1)) / m);
        coeffs[k] = 2.0 * acc / m;
    }
}

}  // namespace strip
