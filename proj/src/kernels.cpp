#include "strip/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <omp.h>

namespace strip::kernels {
namespace {

bool on_boundary(double x, double l) noexcept { return x == 0.0 || x == l; }

double angle(double x, double l) noexcept { return std::numbers::pi * x / l; }

double point_sum(std::span<const double> coeffs, double theta, std::size_t begin, std::size_t end) noexcept
{
    double acc = 0.0;
    for (std::size_t n = begin; n < end; ++n) acc += coeffs[n] * std::sin(static_cast<double>(n + 1) * theta);
    return acc;
}

double pair_sum(std::span<const double> coeffs, double tx, double txi, std::size_t begin, std::size_t end) noexcept
{
    double acc = 0.0;
    for (std::size_t n = begin; n < end; ++n) {
        const double m = static_cast<double>(n + 1);
        acc += coeffs[n] * (std::sin(m * tx) * std::sin(m * txi));
    }
    return acc;
}

// Reduction over fixed chunks; the partials are added in ascending order.
template <class ChunkSum>
double chunked(std::size_t count, ChunkSum&& chunk_sum)
{
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    if (chunks <= 1) return chunk_sum(0, count);
    std::vector<double> partial(chunks);
    const auto nchunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
        const std::size_t b = static_cast<std::size_t>(c) * kChunk;
        const std::size_t e = std::min(count, b + kChunk);
        partial[static_cast<std::size_t>(c)] = chunk_sum(b, e);
    }
    double acc = 0.0;
    for (double v : partial) acc += v;
    return acc;
}

template <class ChunkSum>
double chunked_serial(std::size_t count, ChunkSum&& chunk_sum)
{
    double acc = 0.0;
    for (std::size_t b = 0; b < count; b += kChunk) acc += chunk_sum(b, std::min(count, b + kChunk));
    return acc;
}

std::vector<double> sine_table(std::size_t modes, std::span<const double> x, double l)
{
    std::vector<double> table(modes * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double th = angle(x[i], l);
        const bool edge = on_boundary(x[i], l);
        for (std::size_t n = 0; n < modes; ++n)
            table[n * x.size() + i] = edge ? 0.0 : std::sin(static_cast<double>(n + 1) * th);
    }
    return table;
}

void pair_row(std::span<const double> coeffs, std::span<const double> sx, std::size_t nx, std::size_t i,
              std::span<const double> sxi, std::size_t nxi, double* row) noexcept
{
    for (std::size_t k = 0; k < nxi; ++k) row[k] = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        const double w = coeffs[n] * sx[n * nx + i];
        const double* s = sxi.data() + n * nxi;
        for (std::size_t k = 0; k < nxi; ++k) row[k] += w * s[k];
    }
}

}  // namespace

double mode_sine(std::size_t n, double x, double l) noexcept
{
    if (on_boundary(x, l)) return 0.0;
    return std::sin(static_cast<double>(n) * angle(x, l));
}

int max_threads() noexcept { return omp_get_max_threads(); }

void sine_sum_serial(std::span<const double> coeffs, double l, std::span<const double> x, std::span<double> out)
{
    if (x.size() == 1) {
        const double th = angle(x[0], l);
        out[0] = on_boundary(x[0], l)
                     ? 0.0
                     : chunked_serial(coeffs.size(), [&](std::size_t b, std::size_t e) { return point_sum(coeffs, th, b, e); });
        return;
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = on_boundary(x[i], l) ? 0.0 : point_sum(coeffs, angle(x[i], l), 0, coeffs.size());
}

void sine_sum(std::span<const double> coeffs, double l, std::span<const double> x, std::span<double> out)
{
    if (x.size() == 1) {
        if (on_boundary(x[0], l)) {
            out[0] = 0.0;
            return;
        }
        const double th = angle(x[0], l);
        out[0] = chunked(coeffs.size(), [&](std::size_t b, std::size_t e) { return point_sum(coeffs, th, b, e); });
        return;
    }
    const auto count = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto u = static_cast<std::size_t>(i);
        out[u] = on_boundary(x[u], l) ? 0.0 : point_sum(coeffs, angle(x[u], l), 0, coeffs.size());
    }
}

double sine_pair_sum_serial(std::span<const double> coeffs, double l, double x, double xi)
{
    if (on_boundary(x, l) || on_boundary(xi, l)) return 0.0;
    const double tx = angle(x, l);
    const double txi = angle(xi, l);
    return chunked_serial(coeffs.size(), [&](std::size_t b, std::size_t e) { return pair_sum(coeffs, tx, txi, b, e); });
}

double sine_pair_sum(std::span<const double> coeffs, double l, double x, double xi)
{
    if (on_boundary(x, l) || on_boundary(xi, l)) return 0.0;
    const double tx = angle(x, l);
    const double txi = angle(xi, l);
    return chunked(coeffs.size(), [&](std::size_t b, std::size_t e) { return pair_sum(coeffs, tx, txi, b, e); });
}

void sine_project_serial(std::span<const double> weighted, std::span<const double> nodes, double l,
                         std::span<double> out)
{
    for (std::size_t n = 0; n < out.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) acc += weighted[j] * mode_sine(n + 1, nodes[j], l);
        out[n] = acc;
    }
}

void sine_project(std::span<const double> weighted, std::span<const double> nodes, double l, std::span<double> out)
{
    const auto modes = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < modes; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            acc += weighted[j] * mode_sine(static_cast<std::size_t>(n) + 1, nodes[j], l);
        out[static_cast<std::size_t>(n)] = acc;
    }
}

void pair_grid_serial(std::span<const double> coeffs, double l, std::span<const double> x,
                      std::span<const double> xi, std::span<double> out)
{
    const auto sx = sine_table(coeffs.size(), x, l);
    const auto sxi = sine_table(coeffs.size(), xi, l);
    for (std::size_t i = 0; i < x.size(); ++i) pair_row(coeffs, sx, x.size(), i, sxi, xi.size(), out.data() + i * xi.size());
}

void pair_grid(std::span<const double> coeffs, double l, std::span<const double> x, std::span<const double> xi,
               std::span<double> out)
{
    const auto sx = sine_table(coeffs.size(), x, l);
    const auto sxi = sine_table(coeffs.size(), xi, l);
    const auto rows = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto u = static_cast<std::size_t>(i);
        pair_row(coeffs, sx, x.size(), u, sxi, xi.size(), out.data() + u * xi.size());
    }
}

}  // namespace strip::kernels
