#include "strip/green_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "strip/errors.hpp"
#include "strip/kernels.hpp"

namespace strip {
namespace {

constexpr double pi = std::numbers::pi;

void check_positive_time(double t)
{
    if (!(t > 0.0)) throw DomainError("series evaluation needs t > 0, got t=" + number_text(t));
}

void check_point(const Params& p, double x, const char* name)
{
    if (!(x >= 0.0 && x <= p.l)) throw DomainError(std::string(name) + " outside [0,l]");
}

double kappa(const Params& p) { return p.epsilon * pi * pi / (2.0 * p.l * p.l); }

// sum_{n>N} exp(-alpha n^2) <= exp(-alpha N^2) / (2 alpha N)
double gaussian_tail(double alpha, std::int64_t n)
{
    const double nn = static_cast<double>(n);
    return std::exp(-alpha * nn * nn) / (2.0 * alpha * nn);
}

double evaluate(const Params& p, Series s, double x, double xi, double t, double tol)
{
    p.validate();
    check_point(p, x, "x");
    check_point(p, xi, "xi");
    const TruncationPlan plan = plan_truncation(p, t, tol, s);
    return series_sum(p, s, x, xi, t, plan.n_terms);
}

}  // namespace

DecayConstants decay_constants(const Params& p)
{
    p.validate();
    DecayConstants dc;
    const double ratio = p.l / pi;
    dc.p = p.c * p.c / (p.epsilon + p.a * ratio * ratio);
    dc.q = 0.5 * (p.a + p.epsilon / (ratio * ratio));
    dc.beta = std::min(dc.p, dc.q);
    return dc;
}

std::int64_t minimum_terms(const Params& p, Series s, double k)
{
    const ModeClassification cls = classify_modes(p, k);
    std::int64_t n_min = std::max<std::int64_t>(1, cls.nk - 1);
    if (s == Series::Flux) {
        // The flux coefficient bound needs h_n >= 2a for every n > N.
        const auto first = static_cast<std::int64_t>(std::ceil(p.l / pi * std::sqrt(3.0 * p.a / p.epsilon)));
        n_min = std::max(n_min, first - 1);
    }
    return n_min;
}

double tail_bound(const Params& p, Series s, double t, std::int64_t n_terms, double k)
{
    check_positive_time(t);
    if (n_terms < 1) throw ParameterError("n_terms must be >= 1");
    const DecayConstants dc = decay_constants(p);
    const double two_over_l = 2.0 / p.l;
    const double nn = static_cast<double>(n_terms);
    const double kap = kappa(p);
    const double inv_root = 1.0 / std::sqrt(1.0 - k);
    const double c2 = p.c * p.c;
    switch (s) {
    case Series::Green:
        return two_over_l * uniform_bound_constant(p, k) * std::exp(-dc.p * t) / nn;
    case Series::GreenDt:
        return two_over_l * inv_root *
               (c2 / (p.epsilon * kap) * std::exp(-dc.p * t) / nn +
                std::exp(-0.5 * p.a * t) * gaussian_tail(kap * t, n_terms));
    case Series::Flux: {
        const double r = p.l / pi;
        const double K = 8.0 * c2 * std::abs(p.a * p.epsilon - c2) * r * r * r * r * inv_root /
                         (p.epsilon * p.epsilon * p.epsilon);
        return two_over_l * (K * std::exp(-dc.p * t) / (3.0 * nn * nn * nn) +
                             (p.epsilon + c2 / (4.0 * p.a)) * inv_root * std::exp(-0.5 * p.a * t) *
                                 gaussian_tail(kap * t, n_terms));
    }
    }
    return 0.0;
}

TruncationPlan plan_truncation(const Params& p, double t, double tol, Series s, double k)
{
    p.validate();
    check_positive_time(t);
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    const std::int64_t n_min = minimum_terms(p, s, k);
    if (n_min > kMaxTerms) throw TruncationError("admissible truncation starts beyond the mode cap", INFINITY);

    auto fits = [&](std::int64_t n) { return tail_bound(p, s, t, n, k) <= tol; };
    if (!fits(kMaxTerms))
        throw TruncationError("tolerance " + number_text(tol) + " unreachable within " +
                                  std::to_string(kMaxTerms) + " modes at t=" + number_text(t),
                              tail_bound(p, s, t, kMaxTerms, k));

    std::int64_t lo = n_min;
    std::int64_t hi = kMaxTerms;
    if (!fits(lo)) {
        // Both tail terms decrease monotonically in N; bisect for the first N that fits.
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            (fits(mid) ? hi : lo) = mid;
        }
        lo = hi;
    }
    return {lo, tail_bound(p, s, t, lo, k), tol};
}

std::vector<double> series_coefficients(const Params& p, Series s, double t, std::int64_t n_terms)
{
    p.validate();
    std::vector<double> out(static_cast<std::size_t>(n_terms));
    const auto count = static_cast<std::ptrdiff_t>(n_terms);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const ModeParams m = mode_params(p, i + 1);
        double v = 0.0;
        switch (s) {
        case Series::Green: v = kernel_eval(m, t); break;
        case Series::GreenDt: v = kernel_dt_eval(m, t); break;
        case Series::Flux: v = flux_kernel(m, p, t); break;
        }
        out[static_cast<std::size_t>(i)] = v;
    }
    return out;
}

double series_sum(const Params& p, Series s, double x, double xi, double t, std::int64_t n_terms)
{
    check_point(p, x, "x");
    check_point(p, xi, "xi");
    check_positive_time(t);
    const auto coeffs = series_coefficients(p, s, t, n_terms);
    return 2.0 / p.l * kernels::sine_pair_sum(coeffs, p.l, x, xi);
}

std::vector<double> series_grid(const Params& p, Series s, std::span<const double> x, std::span<const double> xi,
                                double t, std::int64_t n_terms)
{
    for (double v : x) check_point(p, v, "x");
    for (double v : xi) check_point(p, v, "xi");
    check_positive_time(t);
    const auto coeffs = series_coefficients(p, s, t, n_terms);
    std::vector<double> out(x.size() * xi.size());
    kernels::pair_grid(coeffs, p.l, x, xi, out);
    for (double& v : out) v *= 2.0 / p.l;
    return out;
}

double green_eval(const Params& p, double x, double xi, double t, double tol)
{
    return evaluate(p, Series::Green, x, xi, t, tol);
}

double green_dt_eval(const Params& p, double x, double xi, double t, double tol)
{
    return evaluate(p, Series::GreenDt, x, xi, t, tol);
}

double flux_eval(const Params& p, double x, double xi, double t, double tol)
{
    return evaluate(p, Series::Flux, x, xi, t, tol);
}

SeriesEnvelope measure_envelope(const Params& p, Series s, std::span<const double> t, std::size_t grid,
                                double rel_tol)
{
    const DecayConstants dc = decay_constants(p);
    std::vector<double> nodes(grid);
    for (std::size_t i = 0; i < grid; ++i) nodes[i] = p.l * static_cast<double>(i + 1) / static_cast<double>(grid + 1);

    SeriesEnvelope env;
    for (double ti : t) {
        const TruncationPlan plan = plan_truncation(p, ti, rel_tol * std::exp(-dc.beta * ti), s);
        const auto values = series_grid(p, s, nodes, nodes, ti, plan.n_terms);
        double sup = 0.0;
        for (double v : values) sup = std::max(sup, std::abs(v));
        env.partial_sup.push_back(sup);
        sup += plan.tail_bound;
        env.t.push_back(ti);
        env.sup_abs.push_back(sup);
        env.constant = std::max(env.constant, std::exp(dc.beta * ti) * sup);
    }
    return env;
}

double integrated_green_envelope(const Params& p, std::span<const double> t)
{
    const DecayConstants dc = decay_constants(p);
    constexpr std::size_t nx = 33;
    constexpr std::size_t nxi = 256;
    std::vector<double> x(nx), xi(nxi + 1);
    for (std::size_t i = 0; i < nx; ++i) x[i] = p.l * static_cast<double>(i + 1) / static_cast<double>(nx + 1);
    for (std::size_t k = 0; k <= nxi; ++k) xi[k] = k == nxi ? p.l : p.l * static_cast<double>(k) / nxi;
    const double dxi = p.l / nxi;

    double worst = 0.0;
    for (double ti : t) {
        const TruncationPlan plan = plan_truncation(p, ti, 1e-3 * std::exp(-dc.beta * ti), Series::Green);
        const auto g = series_grid(p, Series::Green, x, xi, ti, plan.n_terms);
        for (std::size_t i = 0; i < nx; ++i) {
            double integral = 0.0;
            for (std::size_t k = 0; k <= nxi; ++k) {
                const double w = (k == 0 || k == nxi) ? 0.5 * dxi : dxi;
                integral += w * std::abs(g[i * xi.size() + k]);
            }
            integral += p.l * plan.tail_bound;
            worst = std::max(worst, std::exp(dc.beta * ti) * integral);
        }
    }
    return worst;
}

}  // namespace strip
