#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace strip {

/// Space-time samples, time-major: u[j * x.size() + i] is u(x[i], t[j]).
struct Field {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> u_t;  ///< empty unless requested

    std::size_t nx() const noexcept { return x.size(); }
    std::size_t nt() const noexcept { return t.size(); }
    bool has_dt() const noexcept { return !u_t.empty(); }
    double at(std::size_t i, std::size_t j) const { return u[j * x.size() + i]; }
    std::span<const double> row(std::size_t j) const { return {u.data() + j * x.size(), x.size()}; }

    /// sup_x |u(., t_j)| for every j.
    std::vector<double> sup_over_x() const
    {
        std::vector<double> out(t.size(), 0.0);
        for (std::size_t j = 0; j < t.size(); ++j)
            for (std::size_t i = 0; i < x.size(); ++i) out[j] = std::max(out[j], std::abs(at(i, j)));
        return out;
    }

    double sup_abs() const
    {
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    }
};

}  // namespace strip
