#pragma once

// Picard iteration for the integral form of L_eps u = F(x, t, u):
//   u = u_{g1} + u*_{g0} - G * F(., ., u).
// F is sampled on a collocation grid, transformed to sine coefficients at every
// grid time and convolved with the mode kernels by exact modal propagation.

#include <cstddef>
#include <utility>
#include <vector>

#include "strip/field.hpp"
#include "strip/linear_solver.hpp"
#include "strip/modes.hpp"
#include "strip/source.hpp"
#include "strip/spectrum.hpp"

namespace strip {

struct CollocationGrid {
    std::size_t nx = 65;  ///< uniform nodes on [0,l], both ends included
    double dt = 0.01;
};

struct PicardConfig {
    double tol = 1e-8;  ///< sup-norm change between iterates
    int max_iter = 50;  ///< per window
    CollocationGrid grid;
    int max_depth = 16;  ///< window halvings allowed below the full horizon

    void validate() const;
};

struct NonlinearProblem {
    Params params;
    SineSpectrum g0;
    SineSpectrum g1;
    SourceTerm source;
    double horizon = 1.0;
};

struct WindowReport {
    double t0 = 0.0;
    double t1 = 0.0;
    int iterations = 0;
    std::vector<double> residuals;
    bool converged = false;
};

struct PicardReport {
    int iterations = 0;               ///< summed over accepted windows
    std::vector<double> residuals;    ///< concatenated over accepted windows
    bool converged = false;
    std::vector<WindowReport> windows;
    int abandoned_attempts = 0;       ///< windows split before finishing
    double worst_ratio = 0.0;         ///< largest r_k / r_{k-1} in accepted windows
    double linear_sup = 0.0;          ///< sup |u_{g1} + u*_{g0}| on the grid
    /// For Sine-Gordon: linear_sup + M (1 + |bias|) / beta with
    /// M = sup_t e^{beta t} sup_x int |G| dxi measured on the Green series. NaN otherwise.
    double a_priori_bound = 0.0;
};

/// u_next = linear_part - G * F(u_prev) on the grid of u_prev (uniform in x
/// from 0 to l and uniform in t, at least three time nodes). The convolution
/// starts at u_prev.t.front(). u-independent sources with a spectral callback
/// go through forced_response() instead of the grid transform.
Field picard_step(const Params& p, const Field& linear_part, const Field& u_prev, const SourceTerm& F,
                  const QuadratureConfig& quad = {});

/// Field on the collocation grid (with u_t) and the iteration trace. Windows
/// that fail to contract are halved and restarted from the modal state at the
/// window start. Non-convergence is reported, not thrown; NaN raises NumericalError.
std::pair<Field, PicardReport> picard_solve(const NonlinearProblem& prob, const PicardConfig& cfg = {});

/// M (1 + |bias|) / beta part of the Sine-Gordon bound, M measured over t in (0, t_max].
double sine_gordon_forcing_bound(const Params& p, double bias, double t_max = 30.0);

}  // namespace strip
