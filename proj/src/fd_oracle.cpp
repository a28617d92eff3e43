#include "strip/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "strip/errors.hpp"

namespace strip {
namespace {

// Constant tridiagonal matrix (off, diag, off), LU-factored once (Thomas).
class Tridiagonal {
public:
    Tridiagonal(std::size_t n, double diag, double off) : off_(off), inv_(n), upper_(n)
    {
        double d = diag;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) d = diag - off * upper_[i - 1];
            if (d == 0.0) throw NumericalError("singular oracle system");
            inv_[i] = 1.0 / d;
            upper_[i] = off * inv_[i];
        }
    }

    void solve(std::vector<double>& rhs) const
    {
        const std::size_t n = rhs.size();
        rhs[0] *= inv_[0];
        for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - off_ * rhs[i - 1]) * inv_[i];
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_[i] * rhs[i + 1];
    }

private:
    double off_;
    std::vector<double> inv_, upper_;
};

// D2 w with zero Dirichlet values outside the interior.
void laplacian(const std::vector<double>& w, double inv_dx2, std::vector<double>& out)
{
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? w[i - 1] : 0.0;
        const double right = i + 1 < n ? w[i + 1] : 0.0;
        out[i] = (left - 2.0 * w[i] + right) * inv_dx2;
    }
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

void OracleConfig::validate() const
{
    if (nx < 8) throw ParameterError("oracle needs nx >= 8");
    if (!(dt > 0.0 && std::isfinite(dt))) throw ParameterError("oracle dt must be positive");
    if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("theta must lie in [0,1]");
    if (!(nonlinear_inner_tol > 0.0)) throw ParameterError("inner tolerance must be positive");
    if (max_inner < 1) throw ParameterError("max_inner must be >= 1");
    if (store_every < 1) throw ParameterError("store_every must be >= 1");
}

std::vector<double> oracle_nodes(double l, std::size_t nx)
{
    std::vector<double> x(nx);
    for (std::size_t i = 0; i < nx; ++i) x[i] = l * static_cast<double>(i + 1) / static_cast<double>(nx + 1);
    return x;
}

Field oracle_solve(const Params& p, std::span<const double> g0, std::span<const double> g1, const SourceTerm& F,
                   double horizon, const OracleConfig& cfg)
{
    p.validate();
    cfg.validate();
    if (!(horizon > 0.0 && std::isfinite(horizon))) throw ParameterError("horizon must be positive");
    const std::size_t n = cfg.nx;
    if (g0.size() != n || g1.size() != n) throw InputError("oracle data must hold nx interior samples");

    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon / cfg.dt - 1e-9)));
    const double dt = horizon / static_cast<double>(steps);
    const double dx = p.l / static_cast<double>(n + 1);
    const double inv_dx2 = 1.0 / (dx * dx);
    const double th = cfg.theta;
    const double c2 = p.c * p.c;

    // [(1 + th dt a) I - (th dt eps + th^2 dt^2 c^2) D2] v^{n+1} = rhs
    const double kappa = (th * dt * p.epsilon + th * th * dt * dt * c2) * inv_dx2;
    const Tridiagonal system(n, 1.0 + th * dt * p.a + 2.0 * kappa, -kappa);

    const std::vector<double> x = oracle_nodes(p.l, n);
    std::vector<double> u(g0.begin(), g0.end()), v(g1.begin(), g1.end());
    std::vector<double> d2u(n), d2v(n), base(n), rhs(n), guess(n), u_next(n), f_now(n), tmp(n);

    Field out;
    out.x.reserve(n + 2);
    out.x.push_back(0.0);
    out.x.insert(out.x.end(), x.begin(), x.end());
    out.x.push_back(p.l);
    auto store = [&](double t) {
        out.t.push_back(t);
        out.u.push_back(0.0);
        out.u.insert(out.u.end(), u.begin(), u.end());
        out.u.push_back(0.0);
        out.u_t.push_back(0.0);
        out.u_t.insert(out.u_t.end(), v.begin(), v.end());
        out.u_t.push_back(0.0);
    };
    store(0.0);

    const bool nonlinear = F.depends_on_u();
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = horizon * static_cast<double>(k) / static_cast<double>(steps);
        const double t_next = k + 1 == steps ? horizon : horizon * static_cast<double>(k + 1) / static_cast<double>(steps);
        laplacian(u, inv_dx2, d2u);
        laplacian(v, inv_dx2, d2v);
        for (std::size_t i = 0; i < n; ++i) f_now[i] = F.is_zero() ? 0.0 : F(x[i], t, u[i]);
        // Part of the right-hand side that does not involve F^{n+1}.
        for (std::size_t i = 0; i < n; ++i) {
            const double r_now = p.epsilon * d2v[i] + c2 * d2u[i] - p.a * v[i] - f_now[i];
            tmp[i] = u[i] + dt * (1.0 - th) * v[i];
            base[i] = v[i] + dt * (1.0 - th) * r_now;
        }
        laplacian(tmp, inv_dx2, d2u);
        for (std::size_t i = 0; i < n; ++i) base[i] += th * dt * c2 * d2u[i];

        for (std::size_t i = 0; i < n; ++i) guess[i] = u[i] + dt * v[i];
        bool settled = false;
        for (int it = 0; it < cfg.max_inner; ++it) {
            for (std::size_t i = 0; i < n; ++i) {
                const double f_next = F.is_zero() ? 0.0 : F(x[i], t_next, guess[i]);
                rhs[i] = base[i] - th * dt * f_next;
            }
            system.solve(rhs);
            for (std::size_t i = 0; i < n; ++i) u_next[i] = u[i] + dt * (th * rhs[i] + (1.0 - th) * v[i]);
            const double change = sup_abs_diff(u_next, guess);
            if (!std::isfinite(change)) throw StepFailure("oracle produced a non-finite value", t_next);
            guess.swap(u_next);
            if (!nonlinear || change <= cfg.nonlinear_inner_tol) {
                settled = true;
                break;
            }
        }
        if (!settled)
            throw StepFailure("oracle inner iteration did not settle at t=" + number_text(t_next), t_next);
        u.swap(guess);
        v.swap(rhs);
        if ((k + 1) % cfg.store_every == 0 || k + 1 == steps) store(t_next);
    }
    return out;
}

Field oracle_solve(const OracleProblem& prob, const OracleConfig& cfg)
{
    cfg.validate();
    const std::vector<double> x = oracle_nodes(prob.params.l, cfg.nx);
    std::vector<double> g0(x.size(), 0.0), g1(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (prob.g0) g0[i] = prob.g0(x[i]);
        if (prob.g1) g1[i] = prob.g1(x[i]);
    }
    return oracle_solve(prob.params, g0, g1, prob.source, prob.horizon, cfg);
}

std::vector<ConvergencePoint> convergence_study(const OracleProblem& prob, std::span<const OracleConfig> refinements,
                                                const ReferenceSolution& reference)
{
    if (refinements.empty()) throw InputError("convergence study needs at least one configuration");
    std::vector<Field> runs;
    for (const OracleConfig& c : refinements) runs.push_back(oracle_solve(prob, c));

    const std::size_t levels = reference ? runs.size() : runs.size() - 1;
    if (levels == 0) throw InputError("finest-grid reference needs at least two configurations");
    const Field* finest = reference ? nullptr : &runs.back();

    std::vector<ConvergencePoint> out;
    for (std::size_t k = 0; k < levels; ++k) {
        const Field& f = runs[k];
        double err = 0.0;
        for (std::size_t j = 0; j < f.nt(); ++j) {
            std::vector<double> ref;
            if (reference) {
                ref = reference(f.x, f.t[j]);
            } else {
                const std::size_t ratio = (finest->nx() - 1) / (f.nx() - 1);
                if (ratio * (f.nx() - 1) != finest->nx() - 1)
                    throw InputError("finest grid does not contain the coarser x nodes");
                const auto it = std::find_if(finest->t.begin(), finest->t.end(), [&](double s) {
                    return std::abs(s - f.t[j]) <= 1e-9 * std::max(1.0, prob.horizon);
                });
                if (it == finest->t.end()) throw InputError("finest grid does not contain the coarser times");
                const auto jf = static_cast<std::size_t>(it - finest->t.begin());
                ref.resize(f.nx());
                for (std::size_t i = 0; i < f.nx(); ++i) ref[i] = finest->at(i * ratio, jf);
            }
            for (std::size_t i = 0; i < f.nx(); ++i) err = std::max(err, std::abs(f.at(i, j) - ref[i]));
        }
        ConvergencePoint pt;
        pt.h = prob.params.l / static_cast<double>(refinements[k].nx + 1);
        pt.dt = refinements[k].dt;
        pt.error = err;
        pt.order = out.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : std::log(out.back().error / err) / std::log(out.back().h / pt.h);
        out.push_back(pt);
    }
    return out;
}

}  // namespace strip
