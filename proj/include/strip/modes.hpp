#pragma once

// Per-mode quantities of the strip operator
//   L_eps u = d_xx(eps u_t + c^2 u) - d_t(u_t + a u)
// with Dirichlet conditions on (0,l). Mode n has spatial factor sin(gamma_n x)
// and temporal factor H_n(t) solving H'' + 2 h_n H' + b_n^2 H = 0,
// H(0) = 0, H'(0) = 1.

#include <cstdint>
#include <string_view>

namespace strip {

struct Params {
    double epsilon = 1.0;  ///< third-order (viscous) diffusion
    double a = 1.0;        ///< damping
    double c = 1.0;        ///< wave speed
    double l = 1.0;        ///< strip length

    /// Throws ParameterError unless every constant is finite and positive.
    void validate() const;
};

enum class Regime { Overdamped, Critical, Oscillatory };

std::string_view to_string(Regime r) noexcept;

struct ModeParams {
    std::int64_t n = 1;
    double gamma = 0.0;  ///< n pi / l
    double b = 0.0;      ///< c gamma
    double h = 0.0;      ///< (a + eps gamma^2) / 2
    double omega = 0.0;  ///< |h^2 - b^2|^(1/2), zero when critical
    Regime regime = Regime::Critical;
    /// Slowest decay rate of the mode: h - omega when overdamped
    /// (computed as b^2 / (h + omega)), h otherwise.
    double slow_rate = 0.0;
    /// h + omega when overdamped, h otherwise.
    double fast_rate = 0.0;
};

/// Relative tolerance on |h - b| below which a mode is treated as critical.
inline constexpr double kCriticalRelTol = 1e-12;
/// Below this value of omega*t the kernels switch to Maclaurin series.
inline constexpr double kSeriesSwitch = 1e-4;
/// Default k in (0,1) for classification and term bounds.
inline constexpr double kDefaultK = 0.5;

ModeParams mode_params(const Params& p, std::int64_t n);

/// Builds a mode from raw rates. Used for synthetic near-critical studies.
ModeParams make_mode(std::int64_t n, double gamma, double b, double h);

/// H_n(t).
double kernel_eval(const ModeParams& m, double t);
/// dH_n/dt; equals 1 at t = 0 in every regime.
double kernel_dt_eval(const ModeParams& m, double t);
/// H_n' + 2 h_n H_n: the mode response to unit initial displacement.
/// Its time derivative is -b_n^2 H_n.
double displacement_kernel(const ModeParams& m, double t);
/// eps H_n' + c^2 H_n, evaluated without the large-n cancellation of the direct sum.
double flux_kernel(const ModeParams& m, const Params& p, double t);

struct ModeClassification {
    std::int64_t n1_star = 0;  ///< largest integer strictly below N1 (0 if no band)
    std::int64_t n2_star = 1;  ///< smallest integer strictly above N2 (1 if no band)
    std::int64_t nk = 1;       ///< first index with (b_n/h_n)^2 <= k for all n >= nk
    double k = kDefaultK;
    double n1 = 0.0;           ///< continuous band edges; both 0 when c^2 <= a eps
    double n2 = 0.0;
    bool has_band = false;

    /// True when every n in (n1_star, n2_star) is oscillatory, i.e. the band is non-empty.
    bool oscillatory(std::int64_t n) const noexcept { return has_band && n > n1_star && n < n2_star; }
};

ModeClassification classify_modes(const Params& p, double k = kDefaultK);

/// Certified upper bound on |H_n(t)|.
///
/// Overdamped modes with (b/h)^2 <= k get the uniform algebraic bound
///   (1-k)^(-1/2) / (q - a/2) * exp(-p t) / n^2,
/// every other mode the elementary regime bound (min(t, 1/omega) e^{-ht} for
/// oscillatory, t e^{-ht} for critical, min(t, 1/(2 omega)) e^{-(h-omega)t}
/// for overdamped modes below N_k).
double term_bound(const ModeParams& m, const Params& p, double t, double k = kDefaultK);

/// True when the uniform n^{-2} bound of term_bound applies to this mode.
bool uniform_bound_applies(const ModeParams& m, double k) noexcept;

/// exp(-p t) prefactor constant (1-k)^(-1/2) / (q - a/2).
double uniform_bound_constant(const Params& p, double k);

}  // namespace strip
