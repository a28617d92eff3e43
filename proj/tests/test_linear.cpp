#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "strip/data_functions.hpp"
#include "strip/errors.hpp"
#include "strip/linear_solver.hpp"

using namespace strip;
using std::numbers::pi;

namespace {

const Params P0{1.0, 1.0, 1.0, pi};

SpectralSource constant_mode1()
{
    return [](double) { return SineSpectrum::single(pi, 1, 1.0); };
}

template <class F, class G>
void check_closed_form(const Field& u, F exact, G exact_dt, double tol)
{
    for (std::size_t j = 0; j < u.nt(); ++j)
        for (std::size_t i = 0; i < u.nx(); ++i) {
            CHECK(std::abs(u.at(i, j) - exact(u.x[i], u.t[j])) < tol);
            if (u.has_dt()) CHECK(std::abs(u.u_t[j * u.nx() + i] - exact_dt(u.x[i], u.t[j])) < tol);
        }
}

}  // namespace

TEST_SUITE("linear")
{
    TEST_CASE("propagated coefficients")
    {
        const SineSpectrum s = SineSpectrum::single(pi, 1, 1.0);
        CHECK(propagate_velocity(P0, s, 1.0)[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
        CHECK(propagate_displacement(P0, s, 1.0)[1] == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
        CHECK(propagate_velocity_rate(P0, s, 0.0)[1] == 1.0);
        CHECK(propagate_displacement_rate(P0, s, 0.0)[1] == 0.0);
    }

    TEST_CASE("convolution of the critical kernel")
    {
        const Convolution c = convolve(P0, constant_mode1(), 2.0, {}, true);
        CHECK(c.value[1] == doctest::Approx(1.0 - 3.0 * std::exp(-2.0)).epsilon(1e-10));
        CHECK(c.rate[1] == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-9));
        CHECK(c.estimate < 1e-9);
        CHECK(convolve(P0, constant_mode1(), 0.0).value[1] == 0.0);
    }

    TEST_CASE("quadrature failure is reported")
    {
        QuadratureConfig q;
        q.tol = 1e-300;
        q.max_refinements = 1;
        CHECK_THROWS_AS(convolve(P0, constant_mode1(), 2.0, q), AccuracyError);
    }

    TEST_CASE("single-mode closed forms")
    {
        const OutputGrid grid = OutputGrid::uniform(pi, 21, 3.0, 31, true);
        SUBCASE("initial velocity")
        {
            const LinearProblem prob{P0, SineSpectrum::zero(pi, 1), SineSpectrum::single(pi, 1, 1.0), {}, 3.0};
            check_closed_form(
                solve_linear(prob, grid), [](double x, double t) { return t * std::exp(-t) * std::sin(x); },
                [](double x, double t) { return (1 - t) * std::exp(-t) * std::sin(x); }, 1e-12);
        }
        SUBCASE("initial displacement")
        {
            const LinearProblem prob{P0, SineSpectrum::single(pi, 1, 1.0), SineSpectrum::zero(pi, 1), {}, 3.0};
            check_closed_form(
                solve_linear(prob, grid), [](double x, double t) { return std::exp(-t) * (1 + t) * std::sin(x); },
                [](double x, double t) { return -t * std::exp(-t) * std::sin(x); }, 1e-12);
        }
        SUBCASE("constant source")
        {
            const LinearProblem prob{P0, {}, {}, constant_mode1(), 3.0};
            check_closed_form(
                solve_linear(prob, grid), [](double x, double t) { return -(1 - (1 + t) * std::exp(-t)) * std::sin(x); },
                [](double x, double t) { return -t * std::exp(-t) * std::sin(x); }, 1e-9);
        }
    }

    TEST_CASE("long-time state of a constant source is the steady balance")
    {
        const LinearProblem prob{P0, {}, {}, constant_mode1(), 40.0};
        const OutputGrid grid{{pi / 2}, {40.0}, false};
        CHECK(solve_linear(prob, grid).u[0] == doctest::Approx(-1.0).epsilon(1e-12));
    }

    TEST_CASE("initial data is recovered for compatible data")
    {
        const std::size_t modes = 256;
        const double h = 1e-6;
        for (const char* name : {"sin_3", "poly3", "poly5", "bump"}) {
            const double scale = std::string(name) == "poly5" ? 1e-3 : (std::string(name) == "poly3" ? 1e-2 : 1.0);
            const RealFunction g = data_function(name, pi, scale);
            const SineSpectrum s = data_spectrum(name, pi, modes, scale);
            OutputGrid grid = OutputGrid::uniform(pi, 41, 1.0, 2, false);
            grid.t = {0.0, h, 2 * h};
            const Field u0 = solve_linear(LinearProblem{P0, s, {}, {}, 1.0}, grid);
            const Field u1 = solve_linear(LinearProblem{P0, {}, s, {}, 1.0}, grid);
            for (std::size_t i = 0; i < grid.x.size(); ++i) {
                CAPTURE(name);
                CHECK(std::abs(u0.at(i, 0) - g(grid.x[i])) < 1e-8);
                const double dq = (-3 * u1.at(i, 0) + 4 * u1.at(i, 1) - u1.at(i, 2)) / (2 * h);
                CHECK(std::abs(dq - g(grid.x[i])) < 1e-5);
                const double dq0 = (-3 * u0.at(i, 0) + 4 * u0.at(i, 1) - u0.at(i, 2)) / (2 * h);
                CHECK(std::abs(dq0) < 1e-5);
            }
        }
    }

    TEST_CASE("discrete residual is second order")
    {
        const PointSource f = [](double x, double) { return std::sin(x); };
        double prev = 0.0;
        for (std::size_t k : {0u, 1u, 2u}) {
            const std::size_t n = 26 * (1u << k) + 1;
            const LinearProblem prob{P0, {}, SineSpectrum::single(pi, 1, 1.0), constant_mode1(), 2.0};
            const Field u = solve_linear(prob, OutputGrid::uniform(pi, n, 2.0, n, false));
            const double r = residual(P0, u, f);
            CAPTURE(n);
            CHECK(r < 1e-2);
            if (k > 0) CHECK(prev / r == doctest::Approx(4.0).epsilon(0.1));
            prev = r;
        }
    }

    TEST_CASE("input validation")
    {
        const LinearProblem bad_t{P0, {}, {}, {}, -1.0};
        CHECK_THROWS_AS(solve_linear(bad_t, OutputGrid::uniform(pi, 5, 1.0, 5)), ParameterError);
        const LinearProblem bad_l{P0, SineSpectrum::single(2.0, 1, 1.0), {}, {}, 1.0};
        CHECK_THROWS_AS(solve_linear(bad_l, OutputGrid::uniform(pi, 5, 1.0, 5)), InputError);
        const LinearProblem ok{P0, {}, SineSpectrum::single(pi, 1, 1.0), {}, 1.0};
        CHECK_THROWS_AS(solve_linear(ok, OutputGrid{{4.0}, {0.5}, false}), DomainError);
        CHECK_THROWS_AS(solve_linear(ok, OutputGrid{{1.0}, {1.5}, false}), DomainError);
    }
}
