#include "strip/source.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "strip/errors.hpp"

namespace strip {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_finite_param(double v, const char* name)
{
    if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
}

void check_positive_param(double v, const char* name)
{
    if (!(std::isfinite(v) && v > 0.0)) throw ParameterError(std::string(name) + " must be positive");
}

}  // namespace

SourceTerm::SourceTerm(Variant v) : v_(std::move(v)) {}

SourceTerm SourceTerm::linear(PointSource f, SpectralSource spectral)
{
    if (!f) throw ParameterError("linear source needs a pointwise callback");
    return SourceTerm(LinearSource{std::move(f), std::move(spectral)});
}

SourceTerm SourceTerm::sine_gordon(double bias)
{
    check_finite_param(bias, "bias");
    return SourceTerm(SineGordonSource{bias});
}

SourceTerm SourceTerm::exp_decaying(RealFunction amplitude, double mu)
{
    if (!amplitude) throw ParameterError("exp-decaying source needs an amplitude profile");
    check_positive_param(mu, "mu");
    return SourceTerm(ExpDecayingSource{std::move(amplitude), mu});
}

SourceTerm SourceTerm::algebraic(double h, double k0, double alpha, double l)
{
    check_positive_param(h, "h");
    check_positive_param(k0, "k0");
    check_positive_param(alpha, "alpha");
    check_positive_param(l, "l");
    return SourceTerm(AlgebraicSource{h, k0, alpha, l});
}

SourceTerm SourceTerm::custom(NonlinearCallback f)
{
    if (!f) throw ParameterError("custom source needs a callback");
    return SourceTerm(CustomSource{std::move(f)});
}

double SourceTerm::operator()(double x, double t, double u) const
{
    double value = 0.0;
    try {
        value = std::visit(
            overloaded{
                [](const ZeroSource&) { return 0.0; },
                [&](const LinearSource& s) { return s.pointwise(x, t); },
                [&](const SineGordonSource& s) { return std::sin(u) - s.bias; },
                [&](const ExpDecayingSource& s) { return std::exp(-s.mu * t) * s.amplitude(x) * std::cos(u); },
                [&](const AlgebraicSource& s) {
                    return s.h * std::sin(std::numbers::pi * x / s.l) * std::pow(s.k0 + t, -(1.0 + s.alpha));
                },
                [&](const CustomSource& s) { return s.f(x, t, u); },
            },
            v_);
    } catch (const SourceError&) {
        throw;
    } catch (const std::exception& e) {
        throw SourceError(std::string("source evaluation failed: ") + e.what());
    }
    if (!std::isfinite(value))
        throw SourceError("source is not finite at x=" + number_text(x) + ", t=" + number_text(t));
    return value;
}

bool SourceTerm::depends_on_u() const noexcept
{
    return std::holds_alternative<SineGordonSource>(v_) || std::holds_alternative<ExpDecayingSource>(v_) ||
           std::holds_alternative<CustomSource>(v_);
}

std::string_view SourceTerm::kind() const noexcept
{
    return std::visit(overloaded{
                          [](const ZeroSource&) { return std::string_view("zero"); },
                          [](const LinearSource&) { return std::string_view("linear"); },
                          [](const SineGordonSource&) { return std::string_view("sine-gordon"); },
                          [](const ExpDecayingSource&) { return std::string_view("exp-decaying"); },
                          [](const AlgebraicSource&) { return std::string_view("algebraic"); },
                          [](const CustomSource&) { return std::string_view("custom"); },
                      },
                      v_);
}

SpectralSource SourceTerm::spectral(double l, std::size_t n_modes) const
{
    if (depends_on_u()) throw ParameterError("source depends on u; it has no fixed spectrum");
    if (n_modes < 1) throw ParameterError("n_modes must be >= 1");
    if (is_zero())
        return [l, n_modes](double) { return SineSpectrum::zero(l, n_modes); };
    if (const auto* s = std::get_if<LinearSource>(&v_))
        if (s->spectral) return s->spectral;
    if (const auto* s = std::get_if<AlgebraicSource>(&v_); s && s->l == l) {
        const AlgebraicSource a = *s;
        return [a, l, n_modes](double t) {
            SineSpectrum out = SineSpectrum::zero(l, n_modes);
            out.coeffs[0] = a.h * std::pow(a.k0 + t, -(1.0 + a.alpha));
            return out;
        };
    }
    SourceTerm self = *this;
    return [self, l, n_modes](double t) {
        return analyze([&](double x) { return self(x, t, 0.0); }, l, n_modes);
    };
}

}  // namespace strip
