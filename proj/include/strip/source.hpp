#pragma once

// Right-hand sides F(x, t, u) of L_eps u = F.

#include <functional>
#include <string>
#include <string_view>
#include <variant>

#include "strip/spectrum.hpp"

namespace strip {

using PointSource = std::function<double(double x, double t)>;
using SpectralSource = std::function<SineSpectrum(double t)>;
using NonlinearCallback = std::function<double(double x, double t, double u)>;

struct ZeroSource {};

/// u-independent source. `pointwise` is required; `spectral` is optional and,
/// when present, must describe the same function by its sine coefficients.
struct LinearSource {
    PointSource pointwise;
    SpectralSource spectral;
};

/// F = sin u - bias.
struct SineGordonSource {
    double bias = 0.0;
};

/// F = e^{-mu t} A(x) cos u, so |F| <= sup|A| e^{-mu t}.
struct ExpDecayingSource {
    RealFunction amplitude;
    double mu = 1.0;
};

/// F = h sin(pi x / l) (k0 + t)^{-(1 + alpha)}.
struct AlgebraicSource {
    double h = 1.0;
    double k0 = 1.0;
    double alpha = 0.5;
    double l = 1.0;
};

struct CustomSource {
    NonlinearCallback f;
};

class SourceTerm {
public:
    using Variant =
        std::variant<ZeroSource, LinearSource, SineGordonSource, ExpDecayingSource, AlgebraicSource, CustomSource>;

    SourceTerm() = default;
    SourceTerm(Variant v);

    static SourceTerm zero() { return SourceTerm(ZeroSource{}); }
    static SourceTerm linear(PointSource f, SpectralSource spectral = {});
    static SourceTerm sine_gordon(double bias);
    static SourceTerm exp_decaying(RealFunction amplitude, double mu);
    static SourceTerm algebraic(double h, double k0, double alpha, double l);
    static SourceTerm custom(NonlinearCallback f);

    /// F(x, t, u). Throws SourceError when a callback throws or returns a non-finite value.
    double operator()(double x, double t, double u) const;

    bool is_zero() const noexcept { return std::holds_alternative<ZeroSource>(v_); }
    bool depends_on_u() const noexcept;
    std::string_view kind() const noexcept;
    const Variant& variant() const noexcept { return v_; }

    /// Sine coefficients of F(., t) for u-independent sources (n_modes terms).
    /// Uses the spectral callback when one is given, otherwise analyze().
    SpectralSource spectral(double l, std::size_t n_modes) const;

private:
    Variant v_;
};

}  // namespace strip
