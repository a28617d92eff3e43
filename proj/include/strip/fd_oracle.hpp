#pragma once

// Finite-difference method of lines for L_eps u = F, written independently of
// the spectral path. With v = u_t,
//   u_t = v,  v_t = eps D2 v + c^2 D2 u - a v - F(x, t, u),
// D2 the three-point Laplacian with homogeneous Dirichlet rows, integrated by
// the theta scheme. Eliminating u^{n+1} leaves one constant tridiagonal
// system for v^{n+1}, factored once.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "strip/field.hpp"
#include "strip/modes.hpp"
#include "strip/source.hpp"

namespace strip {

struct OracleConfig {
    std::size_t nx = 63;  ///< interior nodes; dx = l / (nx + 1)
    double dt = 0.01;
    double theta = 0.5;
    double nonlinear_inner_tol = 1e-12;
    int max_inner = 100;
    std::size_t store_every = 1;  ///< keep every k-th step (the last step is always kept)

    void validate() const;
};

/// Throws StepFailure when the inner fixed-point iteration does not settle.
/// g0 and g1 hold the nx interior samples. The returned field includes both
/// boundary nodes and carries u_t.
Field oracle_solve(const Params& p, std::span<const double> g0, std::span<const double> g1, const SourceTerm& F,
                   double horizon, const OracleConfig& cfg);

struct OracleProblem {
    Params params;
    std::function<double(double)> g0;
    std::function<double(double)> g1;
    SourceTerm source;
    double horizon = 1.0;
};

/// Samples the data on the interior nodes and calls oracle_solve.
Field oracle_solve(const OracleProblem& prob, const OracleConfig& cfg);

/// Interior node positions for a configuration.
std::vector<double> oracle_nodes(double l, std::size_t nx);

/// Reference solution on the nodes x at time t.
using ReferenceSolution = std::function<std::vector<double>(std::span<const double> x, double t)>;

struct ConvergencePoint {
    double h = 0.0;
    double dt = 0.0;
    double error = 0.0;
    double order = 0.0;  ///< log(e_prev / e) / log(h_prev / h); NaN for the first level
};

/// Sup-norm errors over every stored node of each run. With an empty reference
/// the last (finest) configuration serves as reference; its grid must contain
/// the coarser ones and it gets no entry of its own.
std::vector<ConvergencePoint> convergence_study(const OracleProblem& prob, std::span<const OracleConfig> refinements,
                                                const ReferenceSolution& reference = {});

}  // namespace strip
