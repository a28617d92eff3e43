#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "strip/errors.hpp"
#include "strip/source.hpp"

using namespace strip;
using std::numbers::pi;

TEST_SUITE("source")
{
    TEST_CASE("pointwise values")
    {
        CHECK(SourceTerm::zero()(1.0, 2.0, 3.0) == 0.0);
        CHECK(SourceTerm::sine_gordon(0.5)(1.0, 2.0, 0.3) == doctest::Approx(std::sin(0.3) - 0.5));
        const SourceTerm e = SourceTerm::exp_decaying([](double x) { return x; }, 0.25);
        CHECK(e(2.0, 4.0, 0.1) == doctest::Approx(std::exp(-1.0) * 2.0 * std::cos(0.1)));
        const SourceTerm a = SourceTerm::algebraic(2.0, 1.0, 0.5, pi);
        CHECK(a(pi / 2, 3.0, 9.0) == doctest::Approx(2.0 * std::pow(4.0, -1.5)));
        const SourceTerm lin = SourceTerm::linear([](double x, double t) { return x * t; });
        CHECK(lin(2.0, 3.0, 100.0) == 6.0);
    }

    TEST_CASE("u dependence and kinds")
    {
        CHECK_FALSE(SourceTerm::zero().depends_on_u());
        CHECK_FALSE(SourceTerm::algebraic(1, 1, 0.5, pi).depends_on_u());
        CHECK(SourceTerm::sine_gordon(0).depends_on_u());
        CHECK(SourceTerm::custom([](double, double, double u) { return u; }).depends_on_u());
        CHECK(SourceTerm::sine_gordon(0).kind() == "sine-gordon");
        CHECK(SourceTerm::zero().is_zero());
        CHECK(SourceTerm().is_zero());
    }

    TEST_CASE("failures become source errors")
    {
        const SourceTerm bad = SourceTerm::custom([](double, double, double) -> double { throw std::runtime_error("boom"); });
        CHECK_THROWS_AS(bad(0.0, 0.0, 0.0), SourceError);
        const SourceTerm nan = SourceTerm::custom([](double, double, double) { return std::nan(""); });
        CHECK_THROWS_AS(nan(0.0, 0.0, 0.0), SourceError);
        CHECK_THROWS_AS(SourceTerm::linear({}), ParameterError);
        CHECK_THROWS_AS(SourceTerm::exp_decaying({}, 1.0), ParameterError);
        CHECK_THROWS_AS(SourceTerm::sine_gordon(0).spectral(pi, 4), ParameterError);
    }

    TEST_CASE("spectra of u-independent sources")
    {
        const SourceTerm a = SourceTerm::algebraic(2.0, 1.0, 0.5, pi);
        const SineSpectrum s = a.spectral(pi, 8)(3.0);
        CHECK(s[1] == doctest::Approx(2.0 * std::pow(4.0, -1.5)).epsilon(1e-15));
        CHECK(s[2] == 0.0);
        const SourceTerm lin = SourceTerm::linear([](double x, double t) { return std::exp(-t) * std::sin(2 * x); });
        const SineSpectrum l = lin.spectral(pi, 8)(1.0);
        CHECK(l[2] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
        CHECK(std::abs(l[1]) < 1e-12);
        const SineSpectrum z = SourceTerm::zero().spectral(pi, 3)(1.0);
        CHECK(z.size() == 3);
    }
}
