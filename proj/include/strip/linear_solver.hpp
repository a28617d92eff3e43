#pragma once

// Linear strip problem
//   L_eps u = f,  u(x,0) = g0,  u_t(x,0) = g1,  u(0,t) = u(l,t) = 0,
// solved mode by mode as u = u_{g1} + u*_{g0} - u_f.

#include <cstddef>
#include <span>
#include <vector>

#include "strip/field.hpp"
#include "strip/modes.hpp"
#include "strip/source.hpp"
#include "strip/spectrum.hpp"

namespace strip {

struct LinearProblem {
    Params params;
    SineSpectrum g0;
    SineSpectrum g1;
    SpectralSource f;  ///< empty means no source
    double horizon = 1.0;

    void validate() const;
};

struct OutputGrid {
    std::vector<double> x;
    std::vector<double> t;
    bool with_dt = false;

    /// nx nodes on [0,l] and nt nodes on [0,T], both ends included.
    static OutputGrid uniform(double l, std::size_t nx, double horizon, std::size_t nt, bool with_dt = false);
};

/// Convolution quadrature: composite Simpson on [0,t] with step
/// min(max_step, t/min_intervals), graded geometrically towards tau = t where
/// the fast modes have their boundary layer. Every refinement halves all
/// steps; the Richardson estimate max_n |S_2h - S_h| / 15 must fall below tol.
struct QuadratureConfig {
    double max_step = 0.01;
    std::size_t min_intervals = 64;
    double tol = 1e-9;
    int max_refinements = 8;
};

/// u_{g1}(., t): coefficients g1_n H_n(t).
SineSpectrum propagate_velocity(const Params& p, const SineSpectrum& g1, double t);
/// d/dt of propagate_velocity: g1_n H_n'(t).
SineSpectrum propagate_velocity_rate(const Params& p, const SineSpectrum& g1, double t);
/// u*_{g0}(., t): coefficients g0_n (H_n' + 2 h_n H_n)(t).
SineSpectrum propagate_displacement(const Params& p, const SineSpectrum& g0, double t);
/// d/dt of propagate_displacement: -b_n^2 g0_n H_n(t).
SineSpectrum propagate_displacement_rate(const Params& p, const SineSpectrum& g0, double t);

struct Convolution {
    SineSpectrum value;   ///< int_0^t f_n(tau) H_n(t - tau) dtau
    SineSpectrum rate;    ///< int_0^t f_n(tau) H_n'(t - tau) dtau, when requested
    double estimate = 0.0;
    int refinements = 0;
};

/// Throws AccuracyError when the estimate stays above tol after max_refinements.
Convolution convolve(const Params& p, const SpectralSource& f, double t, const QuadratureConfig& quad = {},
                     bool with_rate = false);

/// u_f(., t).
SineSpectrum forced_response(const Params& p, const SpectralSource& f, double t, const QuadratureConfig& quad = {});

Field solve_linear(const LinearProblem& prob, const OutputGrid& grid, const QuadratureConfig& quad = {});

/// sup over interior nodes of |L_eps u - f| with central differences in x and t.
/// Needs uniform grids with at least 5 interior nodes on each axis. An empty f means zero.
double residual(const Params& p, const Field& u, const PointSource& f = {});

}  // namespace strip
