#pragma once

// Exact time stepping of the modal equations
//   y_n'' + 2 h_n y_n' + b_n^2 y_n = -F_n(t)
// on a uniform step dt. The homogeneous part is propagated with the exact
// transition matrix [[D, H], [-b^2 H, H']]; the forcing is interpolated by a
// quadratic through three neighbouring samples and integrated against the
// kernel exactly, so stiff high modes need no step restriction.

#include <cstddef>
#include <span>
#include <vector>

#include "strip/modes.hpp"

namespace strip {

/// Modal states sampled on the step grid, time-major: y[j * modes + (n-1)].
struct ModalTrajectory {
    std::size_t modes = 0;
    std::size_t steps = 0;
    std::vector<double> y;
    std::vector<double> ydot;
};

class ModePropagator {
public:
    ModePropagator(const Params& p, std::size_t modes, double dt);

    std::size_t modes() const noexcept { return modes_; }
    double dt() const noexcept { return dt_; }

    /// Advances `steps` steps from (y0, ydot0). `forcing` holds F_n at the
    /// steps+1 grid times, time-major, or is empty for the free evolution.
    /// Needs steps >= 2 when forcing is present.
    ModalTrajectory run(std::span<const double> y0, std::span<const double> ydot0, std::span<const double> forcing,
                        std::size_t steps) const;

    /// Same result computed mode by mode without threads.
    ModalTrajectory run_serial(std::span<const double> y0, std::span<const double> ydot0,
                               std::span<const double> forcing, std::size_t steps) const;

private:
    struct Weights {
        double d = 0.0, h = 0.0, hd = 0.0, b2 = 0.0;
        // Weights of (F_{j-1}, F_j, F_{j+1}) for an interior step and of
        // (F_0, F_1, F_2) for the first step, against H and H'.
        double ih[3]{}, idh[3]{};
        double fh[3]{}, fdh[3]{};
    };

    void run_mode(std::size_t n, std::span<const double> y0, std::span<const double> ydot0,
                  std::span<const double> forcing, std::size_t steps, ModalTrajectory& out) const;

    std::size_t modes_ = 0;
    double dt_ = 0.0;
    std::vector<Weights> w_;
};

/// int_0^dt H(u) (dt - u)^k du for k = 0, 1, 2.
void kernel_moments(const ModeParams& m, double dt, double out[3]);

}  // namespace strip
