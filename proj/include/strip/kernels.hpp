#pragma once

// Data-parallel sine-series kernels. Each kernel has an OpenMP version used by
// the library and a plain serial reference kept for tests and benchmarks.
//
// Summation order is always ascending in the mode index. Kernels that
// parallelise over output points are bit-identical to their serial
// reference; single-point sums are split into fixed-size chunks whose partial
// sums are combined in ascending order, so the result is independent of the
// thread count.

#include <cstddef>
#include <span>

namespace strip::kernels {

/// Terms per chunk in the single-point reductions.
inline constexpr std::size_t kChunk = 8192;

/// out[i] = sum_n coeffs[n-1] sin(n pi x[i] / l); exactly 0 at x = 0 and x = l.
void sine_sum(std::span<const double> coeffs, double l, std::span<const double> x, std::span<double> out);
void sine_sum_serial(std::span<const double> coeffs, double l, std::span<const double> x, std::span<double> out);

/// sum_n coeffs[n-1] sin(gamma_n x) sin(gamma_n xi); symmetric in (x, xi) bit for bit.
double sine_pair_sum(std::span<const double> coeffs, double l, double x, double xi);
double sine_pair_sum_serial(std::span<const double> coeffs, double l, double x, double xi);

/// out[n-1] = sum_j weighted[j] sin(n pi nodes[j] / l) for n = 1..out.size().
void sine_project(std::span<const double> weighted, std::span<const double> nodes, double l, std::span<double> out);
void sine_project_serial(std::span<const double> weighted, std::span<const double> nodes, double l,
                         std::span<double> out);

/// out[i * xi.size() + k] = sum_n coeffs[n-1] sin(gamma_n x[i]) sin(gamma_n xi[k]).
void pair_grid(std::span<const double> coeffs, double l, std::span<const double> x, std::span<const double> xi,
               std::span<double> out);
void pair_grid_serial(std::span<const double> coeffs, double l, std::span<const double> x,
                      std::span<const double> xi, std::span<double> out);

/// sin(n pi x / l), forced to exactly 0 at the two endpoints.
double mode_sine(std::size_t n, double x, double l) noexcept;

int max_threads() noexcept;

}  // namespace strip::kernels
