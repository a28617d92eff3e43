#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "strip/asymptotics.hpp"
#include "strip/errors.hpp"

using namespace strip;

namespace {

std::vector<Sample> series(double T, double dt, double (*f)(double))
{
    std::vector<Sample> out;
    for (double t = 0.0; t <= T + 1e-12; t += dt) out.push_back({t, f(t)});
    return out;
}

}  // namespace

TEST_SUITE("asymptotics")
{
    TEST_CASE("default window")
    {
        CHECK(default_window(100.0) == std::pair{20.0, 90.0});
        CHECK(default_window(10.0) == std::pair{5.0, 9.0});
        CHECK_THROWS_AS(default_window(0.0), ParameterError);
    }

    TEST_CASE("exact exponential")
    {
        const auto s = series(40.0, 0.1, [](double t) { return 3.0 * std::exp(-0.7 * t); });
        const DecayFit fit = decay_fit(s, default_window(40.0));
        CHECK(fit.rate == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(fit.log_amplitude == doctest::Approx(std::log(3.0)).epsilon(1e-10));
        CHECK(fit.max_residual < 1e-10);
        CHECK(fit.samples > 100);
    }

    TEST_CASE("oscillating envelope and noise")
    {
        std::mt19937 rng(7);
        std::normal_distribution<double> noise(0.0, 0.02);
        std::vector<Sample> s;
        for (double t = 0.0; t <= 60.0; t += 0.05)
            s.push_back({t, std::exp(-0.25 * t) * (1.0 + 0.1 * std::cos(3 * t)) * std::exp(noise(rng))});
        const DecayFit fit = decay_fit(s, default_window(60.0));
        CHECK(fit.rate == doctest::Approx(0.25).epsilon(0.02));
    }

    TEST_CASE("zeros are floored, not fatal")
    {
        auto s = series(30.0, 0.5, [](double t) { return std::exp(-t); });
        s[20].value = 0.0;
        const DecayFit fit = decay_fit(s, {5.0, 25.0});
        CHECK(std::isfinite(fit.rate));
    }

    TEST_CASE("too few samples")
    {
        const auto s = series(30.0, 5.0, [](double t) { return std::exp(-t); });
        CHECK_THROWS_AS(decay_fit(s, default_window(30.0)), InputError);
        CHECK_THROWS_AS(decay_fit(s, {5.0, 5.0}), InputError);
    }

    TEST_CASE("algebraic boundedness")
    {
        const auto fast = series(100.0, 0.5, [](double t) { return std::pow(1.0 + t, -1.5); });
        const AlgebraicCheck a = algebraic_decay_check(fast, 0.5);
        CHECK(a.bounded);
        CHECK(a.tail_slope < 0.0);

        const auto exact = series(100.0, 0.5, [](double t) { return std::pow(t + 1e-300, -0.5); });
        CHECK(algebraic_decay_check(exact, 0.5).bounded);

        const auto slow = series(100.0, 0.5, [](double t) { return std::pow(1.0 + t, -0.25); });
        const AlgebraicCheck b = algebraic_decay_check(slow, 0.5);
        CHECK_FALSE(b.bounded);
        CHECK(b.tail_slope == doctest::Approx(0.25).epsilon(0.05));

        const auto short_run = series(20.0, 0.5, [](double t) { return std::exp(-t); });
        CHECK_THROWS_AS(algebraic_decay_check(short_run, 0.5), InputError);
        CHECK_THROWS_AS(algebraic_decay_check(fast, 0.0), ParameterError);
    }
}
