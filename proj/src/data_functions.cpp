#include "strip/data_functions.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "strip/errors.hpp"

namespace strip {
namespace {

// Mode index of "sin" / "sin_<k>", empty for other names.
std::optional<std::size_t> sine_mode(std::string_view name)
{
    if (name == "sin") return 1;
    if (name.substr(0, 4) != "sin_") return std::nullopt;
    const std::string_view digits = name.substr(4);
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || k == 0)
        throw InputError("bad mode index in data function '" + std::string(name) + "'");
    return k;
}

}  // namespace

RealFunction data_function(std::string_view name, double l, double scale)
{
    if (!(l > 0.0)) throw ParameterError("strip length must be positive");
    if (name == "zero") return [](double) { return 0.0; };
    if (const auto k = sine_mode(name)) {
        const double g = static_cast<double>(*k) * std::numbers::pi / l;
        return [g, scale](double x) { return scale * std::sin(g * x); };
    }
    if (name == "bump") {
        return [l, scale](double x) {
            const double r = (2.0 * x - l) / (0.8 * l);
            if (std::abs(r) >= 1.0) return 0.0;
            return scale * std::exp(1.0 - 1.0 / (1.0 - r * r));
        };
    }
    for (int m : {1, 3, 5}) {
        const std::string label = m == 1 ? "poly" : "poly" + std::to_string(m);
        if (name == label)
            return [l, scale, m](double x) { return scale * std::pow(x * (l - x), m); };
    }
    std::string known;
    for (const auto& n : data_function_names()) known += (known.empty() ? "" : ", ") + n;
    throw InputError("unknown data function '" + std::string(name) + "' (known: " + known + ")");
}

SineSpectrum data_spectrum(std::string_view name, double l, std::size_t n_modes, double scale)
{
    if (n_modes < 1) throw InputError("n_modes must be >= 1");
    if (name == "zero") return SineSpectrum::zero(l, n_modes);
    if (const auto k = sine_mode(name)) {
        SineSpectrum s = SineSpectrum::zero(l, std::max(n_modes, *k));
        s.coeffs[*k - 1] = scale;
        s.coeffs.resize(n_modes);
        return s;
    }
    return analyze(data_function(name, l, scale), l, n_modes);
}

std::vector<std::string> data_function_names()
{
    return {"zero", "sin", "sin_<k>", "bump", "poly", "poly3", "poly5"};
}

}  // namespace strip
