#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "reference_values.hpp"
#include "strip/errors.hpp"
#include "strip/green_kernel.hpp"

using namespace strip;
using std::numbers::pi;

namespace {
const Params P0{1.0, 1.0, 1.0, pi};
const Params Pweak{0.1, 0.1, 1.0, pi};
const Params Pstrong{2.0, 2.0, 1.0, pi};
}  // namespace

TEST_SUITE("green")
{
    TEST_CASE("decay constants")
    {
        const DecayConstants d0 = decay_constants(P0);
        CHECK(d0.p == doctest::Approx(0.5));
        CHECK(d0.q == doctest::Approx(1.0));
        CHECK(d0.beta == doctest::Approx(0.5));
        const DecayConstants d1 = decay_constants(Pstrong);
        CHECK(d1.p == doctest::Approx(0.25));
        CHECK(d1.q == doctest::Approx(2.0));
        CHECK(d1.beta == doctest::Approx(0.25));
    }

    TEST_CASE("values against deep sums")
    {
        const double tol = 1e-5;
        for (const auto& r : ref::kGreen) {
            const Params p{r.eps, r.a, r.c, r.l};
            CAPTURE(r.eps);
            CAPTURE(r.x);
            CAPTURE(r.t);
            CHECK(std::abs(green_eval(p, r.x, r.xi, r.t, tol) - r.G) <= tol);
            CHECK(std::abs(green_dt_eval(p, r.x, r.xi, r.t, tol) - r.Gt) <= tol);
            CHECK(std::abs(flux_eval(p, r.x, r.xi, r.t, tol) - r.flux) <= tol);
        }
    }

    TEST_CASE("symmetry and boundary values")
    {
        for (const Params& p : {P0, Pweak, Pstrong})
            for (double t : {0.1, 1.0, 5.0})
                for (double x : {0.1, 0.77, 1.9, 3.0})
                    for (double xi : {0.05, 1.2, 2.6}) {
                        CHECK(green_eval(p, x, xi, t, 1e-4) == green_eval(p, xi, x, t, 1e-4));
                        CHECK(flux_eval(p, x, xi, t, 1e-4) == flux_eval(p, xi, x, t, 1e-4));
                        CHECK(green_eval(p, 0.0, xi, t, 1e-4) == 0.0);
                        CHECK(green_eval(p, p.l, xi, t, 1e-4) == 0.0);
                        CHECK(series_sum(p, Series::GreenDt, x, p.l, t, 5000) == 0.0);
                    }
    }

    TEST_CASE("truncation plan is minimal and certified")
    {
        for (Series s : {Series::Green, Series::GreenDt, Series::Flux})
            for (double t : {0.5, 1.0, 3.0}) {
                const TruncationPlan plan = plan_truncation(P0, t, 1e-5, s);
                CHECK(plan.tail_bound <= 1e-5);
                CHECK(plan.n_terms >= minimum_terms(P0, s));
                if (plan.n_terms > minimum_terms(P0, s)) CHECK(tail_bound(P0, s, t, plan.n_terms - 1) > 1e-5);
            }
        // The tail of the kept sum really is below the certified bound.
        const auto& r = ref::kGreen[0];
        const Params p{r.eps, r.a, r.c, r.l};
        const TruncationPlan plan = plan_truncation(p, r.t, 1e-4, Series::Green);
        CHECK(std::abs(series_sum(p, Series::Green, r.x, r.xi, r.t, plan.n_terms) - r.G) <= plan.tail_bound);
    }

    TEST_CASE("unreachable tolerance")
    {
        // The certified G tail decays only like 1/N at fixed t.
        CHECK_THROWS_AS(plan_truncation(P0, 1.0, 1e-10), TruncationError);
        try {
            (void)plan_truncation(P0, 1.0, 1e-10);
        } catch (const TruncationError& e) {
            CHECK(e.best_tail() > 1e-10);
        }
        CHECK(plan_truncation(P0, 50.0, 1e-8).n_terms <= minimum_terms(P0, Series::Green));
    }

    TEST_CASE("time derivative by central differences")
    {
        const std::int64_t n = 4000;
        const double d = 1e-4;
        for (const Params& p : {P0, Pweak, Pstrong})
            for (double t : {0.3, 1.0, 4.0}) {
                const double fd = (series_sum(p, Series::Green, 1.1, 2.3, t + d, n) -
                                   series_sum(p, Series::Green, 1.1, 2.3, t - d, n)) /
                                  (2 * d);
                CHECK(fd == doctest::Approx(series_sum(p, Series::GreenDt, 1.1, 2.3, t, n)).epsilon(1e-6).scale(1e-3));
            }
    }

    TEST_CASE("flux equals eps G_t + c^2 G")
    {
        // termwise identity, so any common truncation will do; the right side
        // cancels for large n, hence the absolute tolerance
        for (const Params& p : {P0, Pweak, Pstrong})
            for (double t : {0.2, 1.0, 3.0}) {
                const std::int64_t n = 4000;
                const double lhs = series_sum(p, Series::Flux, 0.9, 2.0, t, n);
                const double rhs = p.epsilon * series_sum(p, Series::GreenDt, 0.9, 2.0, t, n) +
                                   p.c * p.c * series_sum(p, Series::Green, 0.9, 2.0, t, n);
                CHECK(std::abs(lhs - rhs) < 1e-10);
            }
        CHECK(std::abs(flux_eval(P0, 0.9, 2.0, 1.0, 1e-5) -
                       (green_dt_eval(P0, 0.9, 2.0, 1.0, 1e-5) + green_eval(P0, 0.9, 2.0, 1.0, 1e-5))) <= 3e-5);
    }

    TEST_CASE("grid evaluation matches pointwise sums")
    {
        const std::vector<double> x{0.0, 0.4, 1.3, 2.9, pi}, xi{0.2, 1.7};
        const auto g = series_grid(P0, Series::Flux, x, xi, 0.7, 300);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t k = 0; k < xi.size(); ++k)
                CHECK(g[i * xi.size() + k] == doctest::Approx(series_sum(P0, Series::Flux, x[i], xi[k], 0.7, 300)).epsilon(1e-13).scale(1e-13));
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(green_eval(P0, 1.0, 1.0, 0.0, 1e-4), DomainError);
        CHECK_THROWS_AS(green_eval(P0, -0.1, 1.0, 1.0, 1e-4), DomainError);
        CHECK_THROWS_AS(green_eval(P0, 1.0, 4.0, 1.0, 1e-4), DomainError);
        CHECK_THROWS_AS(green_eval(P0, 1.0, 1.0, 1.0, 0.0), ParameterError);
    }

    TEST_CASE("operator residual")
    {
        // d_xx (eps G_t + c^2 G) - G_tt - a G_t on the truncated series.
        const std::int64_t n = 2000;
        const double d = 1e-3;
        for (const Params& p : {P0, Pweak})
            for (double t : {0.5, 2.0})
                for (double x : {0.7, 1.6, 2.5}) {
                    const double xi = 1.1;
                    const double fxx = (series_sum(p, Series::Flux, x + d, xi, t, n) - 2 * series_sum(p, Series::Flux, x, xi, t, n) +
                                        series_sum(p, Series::Flux, x - d, xi, t, n)) /
                                       (d * d);
                    const double gtt = (series_sum(p, Series::GreenDt, x, xi, t + d, n) -
                                        series_sum(p, Series::GreenDt, x, xi, t - d, n)) /
                                       (2 * d);
                    const double r = fxx - gtt - p.a * series_sum(p, Series::GreenDt, x, xi, t, n);
                    CHECK(std::abs(r) < 1e-4);
                }
    }

    TEST_CASE("envelopes decay at least at rate beta")
    {
        std::vector<double> t;
        for (double s = 0.1; s <= 30.0; s += 1.0) t.push_back(s);
        for (Series s : {Series::Green, Series::GreenDt, Series::Flux}) {
            const SeriesEnvelope env = measure_envelope(P0, s, t, 11);
            CHECK(std::isfinite(env.constant));
            CHECK(env.constant < 10.0);
        }
        const double M = integrated_green_envelope(P0, t);
        CHECK(M > 0.0);
        CHECK(M < 10.0);
    }
}
