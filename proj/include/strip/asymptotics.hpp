#pragma once

// Decay-rate estimation on sampled sup-norm histories.

#include <cstddef>
#include <span>
#include <utility>

namespace strip {

struct Sample {
    double t = 0.0;
    double value = 0.0;
};

struct DecayFit {
    double rate = 0.0;            ///< minus the slope of log(value) against t
    double log_amplitude = 0.0;   ///< intercept
    double max_residual = 0.0;    ///< largest |log value - fitted line| on the window
    std::pair<double, double> window{0.0, 0.0};
    std::size_t samples = 0;
};

/// Values below this floor are clamped before taking logarithms.
inline constexpr double kLogFloor = 1e-300;
inline constexpr std::size_t kMinFitSamples = 10;

/// [max(5, 0.2 T), 0.9 T].
std::pair<double, double> default_window(double horizon);

/// Least-squares line through (t, log value) for samples with t in the window.
/// Throws InputError with fewer than 10 usable samples or an empty window.
DecayFit decay_fit(std::span<const Sample> series, std::pair<double, double> window);

struct AlgebraicCheck {
    bool bounded = false;
    double sup_of_product = 0.0;  ///< sup over t >= 1 of value * t^alpha
    double tail_slope = 0.0;      ///< log-log slope of value * t^alpha over the tail half
};

/// Decides whether value(t) t^alpha stays bounded. The series must cover
/// [1, T] with T >= 50. The product counts as bounded when its log-log slope
/// over the second half of [1, T] (in log t) does not exceed alpha / 4; a
/// decay of t^{-alpha/2} gives slope alpha / 2 and fails.
AlgebraicCheck algebraic_decay_check(std::span<const Sample> series, double alpha);

}  // namespace strip
