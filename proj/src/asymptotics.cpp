#include "strip/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "strip/errors.hpp"

namespace strip {
namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw InputError("fit needs at least two distinct abscissae");
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    return l;
}

}  // namespace

std::pair<double, double> default_window(double horizon)
{
    if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
    return {std::max(5.0, 0.2 * horizon), 0.9 * horizon};
}

DecayFit decay_fit(std::span<const Sample> series, std::pair<double, double> window)
{
    if (!(window.first < window.second)) throw InputError("fit window must satisfy t_lo < t_hi");
    std::vector<double> t, y;
    for (const Sample& s : series) {
        if (!std::isfinite(s.t) || !std::isfinite(s.value)) continue;
        if (s.t < window.first || s.t > window.second) continue;
        t.push_back(s.t);
        y.push_back(std::log(std::max(std::abs(s.value), kLogFloor)));
    }
    if (t.size() < kMinFitSamples)
        throw InputError("decay fit needs at least " + std::to_string(kMinFitSamples) + " samples in the window, got " +
                         std::to_string(t.size()));
    const Line line = least_squares(t, y);
    DecayFit fit;
    fit.rate = -line.slope;
    fit.log_amplitude = line.intercept;
    fit.window = window;
    fit.samples = t.size();
    for (std::size_t i = 0; i < t.size(); ++i)
        fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - (line.intercept + line.slope * t[i])));
    return fit;
}

AlgebraicCheck algebraic_decay_check(std::span<const Sample> series, double alpha)
{
    if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
    double t_min = INFINITY, t_max = -INFINITY;
    for (const Sample& s : series) {
        t_min = std::min(t_min, s.t);
        t_max = std::max(t_max, s.t);
    }
    if (series.empty() || t_min > 1.0 || t_max < 50.0)
        throw InputError("algebraic check needs samples covering [1, T] with T >= 50");

    AlgebraicCheck out;
    const double split = std::sqrt(t_max);  // midpoint of [1, T] in log t
    std::vector<double> lx, ly;
    for (const Sample& s : series) {
        if (s.t < 1.0) continue;
        const double product = std::abs(s.value) * std::pow(s.t, alpha);
        out.sup_of_product = std::max(out.sup_of_product, product);
        if (s.t >= split) {
            lx.push_back(std::log(s.t));
            ly.push_back(std::log(std::max(product, kLogFloor)));
        }
    }
    if (lx.size() < 2) throw InputError("algebraic check needs at least two tail samples");
    out.tail_slope = least_squares(lx, ly).slope;
    out.bounded = std::isfinite(out.sup_of_product) && out.tail_slope <= 0.25 * alpha;
    return out;
}

}  // namespace strip
