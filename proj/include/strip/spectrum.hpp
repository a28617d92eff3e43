#pragma once

// Fourier sine representation of functions on (0,l). Every solution operator
// of the strip problem acts diagonally on these coefficients.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace strip {

/// g(x) ~ sum_{n=1}^{N} coeffs[n-1] sin(n pi x / l).
struct SineSpectrum {
    double l = 1.0;
    std::vector<double> coeffs;

    std::size_t size() const noexcept { return coeffs.size(); }
    /// Coefficient of mode n (1-based); zero beyond the stored range.
    double operator[](std::size_t n) const noexcept { return n >= 1 && n <= coeffs.size() ? coeffs[n - 1] : 0.0; }

    static SineSpectrum zero(double l, std::size_t n_modes) { return {l, std::vector<double>(n_modes, 0.0)}; }
    static SineSpectrum single(double l, std::size_t mode, double amplitude);
};

/// alpha x + beta y, padded to the longer of the two.
SineSpectrum combine(double alpha, const SineSpectrum& x, double beta, const SineSpectrum& y);

struct SampledFunction {
    double l = 1.0;
    std::vector<double> nodes;   ///< strictly increasing, first 0, last l
    std::vector<double> values;

    /// Throws InputError on a malformed layout or non-finite values.
    void validate() const;
    bool uniform() const noexcept;
};

using RealFunction = std::function<double(double)>;

SampledFunction sample_uniform(const RealFunction& g, double l, std::size_t intervals);

/// Largest of |g(0)|, |g(l)|; the sine series attains its data uniformly only when this vanishes.
double boundary_mismatch(const SampledFunction& g);

/// Boundary values above this trigger a soft warning in analyze().
inline constexpr double kBoundaryWarnLevel = 1e-8;

/// Sine coefficients (2/l) int_0^l g sin(gamma_n xi) dxi.
///
/// Uniform nodes use the discrete sine transform (the trapezoid rule on the odd
/// periodic extension, spectrally accurate for compatible data). Other layouts
/// use composite Simpson weights on the given nodes (fourth order; an odd
/// final interval takes the quadratic through the last three nodes).
SineSpectrum analyze(const SampledFunction& g, std::size_t n_modes);

/// Samples g on a uniform grid of max(1024, 8 n_modes) intervals and applies the sine transform.
SineSpectrum analyze(const RealFunction& g, double l, std::size_t n_modes);

double synthesize(const SineSpectrum& s, double x);
std::vector<double> synthesize(const SineSpectrum& s, std::span<const double> x);

/// Coefficient-wise multiplication by -gamma_n^2.
SineSpectrum second_derivative(const SineSpectrum& s);

/// Composite Simpson weights for arbitrary increasing nodes (at least two).
std::vector<double> simpson_weights(std::span<const double> nodes);

/// DST-I on a uniform grid of `intervals` cells, backed by FFTW.
///
/// forward(): samples at the intervals+1 grid nodes (end values ignored) to the
/// intervals-1 sine coefficients. inverse(): coefficients back to node values.
/// Execution is thread-safe; one object may be shared by several threads.
class SineTransform {
public:
    explicit SineTransform(std::size_t intervals);
    ~SineTransform();
    SineTransform(SineTransform&&) noexcept;
    SineTransform& operator=(SineTransform&&) noexcept;
    SineTransform(const SineTransform&) = delete;
    SineTransform& operator=(const SineTransform&) = delete;

    std::size_t intervals() const noexcept { return intervals_; }
    std::size_t modes() const noexcept { return intervals_ - 1; }

    void forward(std::span<const double> node_values, std::span<double> coeffs) const;
    void inverse(std::span<const double> coeffs, std::span<double> node_values) const;

private:
    struct Plan;
    std::size_t intervals_ = 0;
    std::unique_ptr<Plan> plan_;
};

/// Direct O(N M) evaluation of SineTransform::forward, kept as the reference.
void sine_transform_reference(std::span<const double> node_values, std::span<double> coeffs);

}  // namespace strip
