#include "strip/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "strip/errors.hpp"
#include "strip/green_kernel.hpp"

namespace strip {
namespace {

// Maclaurin tails for |x| < kSeriesSwitch; the x^8 term is below 1e-32.
double sinhc_series(double x) { const double x2 = x * x; return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0)); }
double sinc_series(double x) { const double x2 = x * x; return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0)); }
double cosh_series(double x) { const double x2 = x * x; return 1.0 + x2 / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0)); }
double cos_series(double x) { const double x2 = x * x; return 1.0 - x2 / 2.0 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0)); }

// (1 - e^{-y}) / (2 omega) written with expm1; callers guarantee y = 2 omega t >= 2 kSeriesSwitch.
double one_minus_exp_over(double y, double two_omega) { return -std::expm1(-y) / two_omega; }

void check_time(double t)
{
    if (!(t >= 0.0)) throw DomainError("mode kernel evaluated at negative or NaN time t=" + number_text(t));
}

void check_k(double k)
{
    if (!(k > 0.0 && k < 1.0)) throw ParameterError("k must lie in (0,1), got " + std::to_string(k));
}

}  // namespace

void Params::validate() const
{
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(epsilon)) throw ParameterError("epsilon must be positive and finite");
    if (!ok(a)) throw ParameterError("a must be positive and finite");
    if (!ok(c)) throw ParameterError("c must be positive and finite");
    if (!ok(l)) throw ParameterError("l must be positive and finite");
}

std::string_view to_string(Regime r) noexcept
{
    switch (r) {
    case Regime::Overdamped: return "Overdamped";
    case Regime::Critical: return "Critical";
    case Regime::Oscillatory: return "Oscillatory";
    }
    return "unknown";
}

ModeParams make_mode(std::int64_t n, double gamma, double b, double h)
{
    ModeParams m;
    m.n = n;
    m.gamma = gamma;
    m.b = b;
    m.h = h;
    if (std::abs(h - b) <= kCriticalRelTol * h) {
        m.regime = Regime::Critical;
        m.omega = 0.0;
        m.slow_rate = m.fast_rate = h;
    } else if (h > b) {
        m.regime = Regime::Overdamped;
        m.omega = std::sqrt((h - b) * (h + b));
        m.slow_rate = b * b / (h + m.omega);
        m.fast_rate = h + m.omega;
    } else {
        m.regime = Regime::Oscillatory;
        m.omega = std::sqrt((b - h) * (b + h));
        m.slow_rate = m.fast_rate = h;
    }
    return m;
}

ModeParams mode_params(const Params& p, std::int64_t n)
{
    p.validate();
    if (n < 1) throw ParameterError("mode index must be >= 1, got " + std::to_string(n));
    const double gamma = static_cast<double>(n) * std::numbers::pi / p.l;
    return make_mode(n, gamma, p.c * gamma, 0.5 * (p.a + p.epsilon * gamma * gamma));
}

double kernel_eval(const ModeParams& m, double t)
{
    check_time(t);
    if (t == 0.0) return 0.0;
    const double x = m.omega * t;
    switch (m.regime) {
    case Regime::Critical:
        return t * std::exp(-m.h * t);
    case Regime::Oscillatory:
        if (x < kSeriesSwitch) return std::exp(-m.h * t) * t * sinc_series(x);
        return std::exp(-m.h * t) * std::sin(x) / m.omega;
    case Regime::Overdamped:
        if (x < kSeriesSwitch) return std::exp(-m.h * t) * t * sinhc_series(x);
        return std::exp(-m.slow_rate * t) * one_minus_exp_over(2.0 * x, 2.0 * m.omega);
    }
    return 0.0;
}

double kernel_dt_eval(const ModeParams& m, double t)
{
    check_time(t);
    if (t == 0.0) return 1.0;
    const double x = m.omega * t;
    switch (m.regime) {
    case Regime::Critical:
        return std::exp(-m.h * t) * (1.0 - m.h * t);
    case Regime::Oscillatory: {
        const double sc = x < kSeriesSwitch ? sinc_series(x) : std::sin(x) / x;
        const double cs = x < kSeriesSwitch ? cos_series(x) : std::cos(x);
        return std::exp(-m.h * t) * (cs - m.h * t * sc);
    }
    case Regime::Overdamped: {
        if (x < kSeriesSwitch) return std::exp(-m.h * t) * (cosh_series(x) - m.h * t * sinhc_series(x));
        const double s = m.slow_rate;
        const double f = m.fast_rate;
        if (2.0 * x <= 1.0) return std::exp(-s * t) * (1.0 - f * one_minus_exp_over(2.0 * x, 2.0 * m.omega));
        return (f * std::exp(-f * t) - s * std::exp(-s * t)) / (2.0 * m.omega);
    }
    }
    return 0.0;
}

double displacement_kernel(const ModeParams& m, double t)
{
    check_time(t);
    if (t == 0.0) return 1.0;
    const double x = m.omega * t;
    switch (m.regime) {
    case Regime::Critical:
        return std::exp(-m.h * t) * (1.0 + m.h * t);
    case Regime::Oscillatory: {
        const double sc = x < kSeriesSwitch ? sinc_series(x) : std::sin(x) / x;
        const double cs = x < kSeriesSwitch ? cos_series(x) : std::cos(x);
        return std::exp(-m.h * t) * (cs + m.h * t * sc);
    }
    case Regime::Overdamped:
        if (x < kSeriesSwitch) return std::exp(-m.h * t) * (cosh_series(x) + m.h * t * sinhc_series(x));
        // H' + 2hH = e^{-(h-w)t} + (h-w) H
        return std::exp(-m.slow_rate * t) + m.slow_rate * kernel_eval(m, t);
    }
    return 0.0;
}

double flux_kernel(const ModeParams& m, const Params& p, double t)
{
    check_time(t);
    const double x = m.omega * t;
    if (m.regime != Regime::Overdamped || 2.0 * x <= 1.0)
        return p.epsilon * kernel_dt_eval(m, t) + p.c * p.c * kernel_eval(m, t);

    const double s = m.slow_rate;
    const double f = m.fast_rate;
    const double c2 = p.c * p.c;
    // c^2 - eps (h - w) = c^2 gamma^2 (a eps - c^2) / ((h + w)(h + w - a)).
    const double den = m.h + m.omega - p.a;
    const double slow_coeff = den > 0.5 * m.h
        ? c2 * m.gamma * m.gamma * (p.a * p.epsilon - c2) / ((m.h + m.omega) * den)
        : c2 - p.epsilon * s;
    const double fast_coeff = p.epsilon * f - c2;
    return (slow_coeff * std::exp(-s * t) + fast_coeff * std::exp(-f * t)) / (2.0 * m.omega);
}

ModeClassification classify_modes(const Params& p, double k)
{
    p.validate();
    check_k(k);
    ModeClassification out;
    out.k = k;
    const double c2 = p.c * p.c;
    const double ae = p.a * p.epsilon;
    const double scale = p.c * p.l / (p.epsilon * std::numbers::pi);

    if (c2 > ae) {
        const double root = std::sqrt(1.0 - ae / c2);
        out.has_band = true;
        out.n1 = scale * (ae / c2) / (1.0 + root);  // scale * (1 - root) without cancellation
        out.n2 = scale * (1.0 + root);
        out.n1_star = static_cast<std::int64_t>(std::ceil(out.n1)) - 1;
        out.n2_star = static_cast<std::int64_t>(std::floor(out.n2)) + 1;
        if (out.n1_star >= out.n2_star - 1) out.has_band = false;
    }

    if (c2 <= k * ae) {
        out.nk = 1;
    } else {
        const double threshold = scale / std::sqrt(k) * (1.0 + std::sqrt(1.0 - ae * k / c2));
        out.nk = static_cast<std::int64_t>(std::floor(threshold)) + 1;
    }
    // Guard the floor/ceil against rounding at the threshold itself.
    while (!uniform_bound_applies(mode_params(p, out.nk), k)) ++out.nk;
    return out;
}

bool uniform_bound_applies(const ModeParams& m, double k) noexcept
{
    return m.regime == Regime::Overdamped && m.b * m.b <= k * m.h * m.h;
}

double uniform_bound_constant(const Params& p, double k)
{
    check_k(k);
    const DecayConstants dc = decay_constants(p);
    return 1.0 / (std::sqrt(1.0 - k) * (dc.q - 0.5 * p.a));
}

double term_bound(const ModeParams& m, const Params& p, double t, double k)
{
    check_time(t);
    check_k(k);
    switch (m.regime) {
    case Regime::Oscillatory:
        return std::min(t, 1.0 / m.omega) * std::exp(-m.h * t);
    case Regime::Critical:
        return t * std::exp(-m.h * t);
    case Regime::Overdamped:
        if (uniform_bound_applies(m, k)) {
            const double n = static_cast<double>(m.n);
            return uniform_bound_constant(p, k) * std::exp(-decay_constants(p).p * t) / (n * n);
        }
        return std::min(t, 1.0 / (2.0 * m.omega)) * std::exp(-m.slow_rate * t);
    }
    return 0.0;
}

}  // namespace strip
