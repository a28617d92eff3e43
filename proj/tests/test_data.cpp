#include <cmath>
#include <numbers>

#include "doctest.h"
#include "strip/data_functions.hpp"
#include "strip/errors.hpp"

using namespace strip;
using std::numbers::pi;

TEST_SUITE("data")
{
    TEST_CASE("built-in functions")
    {
        CHECK(data_function("zero", pi)(1.0) == 0.0);
        CHECK(data_function("sin", pi)(pi / 2) == doctest::Approx(1.0));
        CHECK(data_function("sin_3", 2.0, 2.0)(1.0 / 3.0) == doctest::Approx(2.0));
        CHECK(data_function("poly", pi)(1.0) == doctest::Approx(pi - 1.0));
        CHECK(data_function("poly3", pi)(1.0) == doctest::Approx(std::pow(pi - 1.0, 3)));
        CHECK(data_function("poly5", pi)(1.0) == doctest::Approx(std::pow(pi - 1.0, 5)));
        CHECK(data_function("bump", pi)(pi / 2) == doctest::Approx(1.0));
        CHECK(data_function("bump", pi)(0.1 * pi) == 0.0);
        CHECK(data_function("bump", pi)(0.95 * pi) == 0.0);
        for (const char* n : {"sin", "poly", "poly3", "poly5", "bump"}) {
            CHECK(data_function(n, pi)(0.0) == doctest::Approx(0.0).scale(1.0));
            CHECK(std::abs(data_function(n, pi)(pi)) < 1e-12);
        }
    }

    TEST_CASE("spectra")
    {
        const SineSpectrum s = data_spectrum("sin_4", pi, 8, 0.5);
        CHECK(s[4] == 0.5);
        CHECK(s[3] == 0.0);
        CHECK(data_spectrum("sin_9", pi, 8)[9] == 0.0);
        CHECK(data_spectrum("poly", pi, 4)[1] == doctest::Approx(8.0 / pi).epsilon(1e-6));
    }

    TEST_CASE("unknown names")
    {
        CHECK_THROWS_AS(data_function("gauss", pi), InputError);
        CHECK_THROWS_AS(data_function("sin_0", pi), InputError);
        CHECK_THROWS_AS(data_function("sin_x", pi), InputError);
        CHECK(data_function_names().size() >= 6);
    }
}
