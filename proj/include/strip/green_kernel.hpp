#pragma once

// Green's function of the Dirichlet strip problem,
//   G(x, xi, t) = (2/l) sum_n H_n(t) sin(gamma_n xi) sin(gamma_n x),
// its time derivative and the flux combination eps G_t + c^2 G, each
// truncated by a certified tail bound.

#include <cstdint>
#include <span>
#include <vector>

#include "strip/modes.hpp"

namespace strip {

struct DecayConstants {
    double p = 0.0;     ///< c^2 / (eps + a (l/pi)^2)
    double q = 0.0;     ///< (a + eps (pi/l)^2) / 2
    double beta = 0.0;  ///< min(p, q)
};

DecayConstants decay_constants(const Params& p);

/// Which series: G, G_t, or eps G_t + c^2 G.
enum class Series { Green, GreenDt, Flux };

struct TruncationPlan {
    std::int64_t n_terms = 1;
    double tail_bound = 0.0;  ///< certified bound on the discarded tail, <= tolerance
    double tolerance = 0.0;
};

/// Hard cap on the number of retained modes.
inline constexpr std::int64_t kMaxTerms = 1'000'000;

/// Bound on |sum_{n>N} term_n| for the chosen series, uniform in (x, xi).
///
///  G:    (2/l) C e^{-pt} / N                          (sum 1/n^2 < 1/N)
///  G_t:  (2/l) (1-k)^{-1/2} [ c^2/(eps kappa) e^{-pt}/N + e^{-at/2} e^{-kappa t N^2}/(2 kappa t N) ]
///  flux: (2/l) [ K e^{-pt}/(3N^3) + (eps + c^2/(4a)) (1-k)^{-1/2} e^{-at/2} e^{-kappa t N^2}/(2 kappa t N) ]
///
/// with kappa = eps pi^2/(2 l^2), C the term_bound constant and
/// K = 8 c^2 |a eps - c^2| (l/pi)^4 / ((1-k)^{1/2} eps^3). Valid for N >= minimum_terms().
double tail_bound(const Params& p, Series s, double t, std::int64_t n_terms, double k = kDefaultK);

/// Smallest N beyond which every mode satisfies the hypotheses of tail_bound().
std::int64_t minimum_terms(const Params& p, Series s, double k = kDefaultK);

/// Smallest admissible N whose tail bound is below tol. Throws TruncationError past kMaxTerms.
TruncationPlan plan_truncation(const Params& p, double t, double tol, Series s = Series::Green, double k = kDefaultK);

/// Per-mode temporal coefficients of the chosen series for n = 1..n_terms.
std::vector<double> series_coefficients(const Params& p, Series s, double t, std::int64_t n_terms);

double green_eval(const Params& p, double x, double xi, double t, double tol);
double green_dt_eval(const Params& p, double x, double xi, double t, double tol);
double flux_eval(const Params& p, double x, double xi, double t, double tol);

/// Fixed-length partial sum (2/l) sum_{n<=n_terms} coeff_n sin sin.
double series_sum(const Params& p, Series s, double x, double xi, double t, std::int64_t n_terms);

/// Partial sums on a tensor grid; result[i * xi.size() + k] is the value at (x[i], xi[k]).
std::vector<double> series_grid(const Params& p, Series s, std::span<const double> x, std::span<const double> xi,
                                double t, std::int64_t n_terms);

struct SeriesEnvelope {
    std::vector<double> t;
    std::vector<double> partial_sup;  ///< sup over the (x, xi) grid of the truncated sum
    std::vector<double> sup_abs;      ///< partial_sup plus the certified tail
    double constant = 0.0;        ///< max over t of e^{beta t} sup_abs
};

/// Measures sup_{x,xi} |series| on an interior grid for each t. Each sum is
/// truncated at relative tolerance rel_tol against the e^{-beta t} envelope.
SeriesEnvelope measure_envelope(const Params& p, Series s, std::span<const double> t, std::size_t grid = 21,
                                double rel_tol = 1e-3);

/// sup_{x,t} e^{beta t} int_0^l |G(x, xi, t)| dxi over the given times, tail included.
double integrated_green_envelope(const Params& p, std::span<const double> t);

}  // namespace strip
