#include "fig8/lbfgs.hpp"

#include <cmath>
#include <stdexcept>

namespace fig8 {

namespace {

double inf_norm(const std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void LbfgsOptions::validate() const {
    if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
    if (!(ls_shrink > 0.0 && ls_shrink < 1.0))
        throw std::invalid_argument("ls_shrink must be in (0,1)");
    if (!(ls_c1 > 0.0 && ls_c1 < 1.0)) throw std::invalid_argument("ls_c1 must be in (0,1)");
    if (memory < 1) throw std::invalid_argument("memory must be >= 1");
    if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
}

LbfgsResult lbfgs_minimize(
    std::vector<double> x,
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& objective,
    const LbfgsOptions& opts,
    const std::function<bool(const std::vector<double>&)>& acceptable,
    const std::function<void(int, double, double, const std::vector<double>&)>& on_iterate) {
    opts.validate();
    const size_t n = x.size();

    std::vector<double> g(n), g_new(n), x_new(n), d(n), q(n);
    std::deque<std::vector<double>> S, Y;
    std::deque<double> rho;

    LbfgsResult res;
    res.f = objective(x, g);
    res.grad_norm = inf_norm(g);

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (res.grad_norm <= opts.grad_tol) {
            res.status = LbfgsStatus::converged;
            break;
        }

        // Two-loop recursion.
        q = g;
        std::vector<double> alpha(S.size());
        for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
            alpha[i] = rho[i] * dot(S[i], q);
            for (size_t k = 0; k < n; ++k) q[k] -= alpha[i] * Y[i][k];
        }
        double gamma = 1.0;
        if (!S.empty()) {
            const double yy = dot(Y.back(), Y.back());
            if (yy > 0.0) gamma = dot(S.back(), Y.back()) / yy;
        }
        for (size_t k = 0; k < n; ++k) q[k] *= gamma;
        for (size_t i = 0; i < S.size(); ++i) {
            const double beta = rho[i] * dot(Y[i], q);
            for (size_t k = 0; k < n; ++k) q[k] += (alpha[i] - beta) * S[i][k];
        }
        for (size_t k = 0; k < n; ++k) d[k] = -q[k];

        double slope = dot(g, d);
        if (!(slope < 0.0)) {  // fall back to steepest descent
            for (size_t k = 0; k < n; ++k) d[k] = -g[k];
            slope = -dot(g, g);
            S.clear();
            Y.clear();
            rho.clear();
        }

        // Armijo backtracking with a rounding-level slack so that steps
        // whose true decrease is near machine epsilon are still accepted;
        // the guard predicate vetoes trial points.  A trial that does not
        // move x at all (step underflow) counts as a failure instead of
        // silently looping in place.
        double f_new = res.f;
        auto line_search = [&](double sl) {
            double step = 1.0;
            const double slack = 4.0 * 2.220446049250313e-16 * std::abs(res.f);
            for (int ls = 0; ls < 60; ++ls, step *= opts.ls_shrink) {
                bool moved = false;
                for (size_t k = 0; k < n; ++k) {
                    x_new[k] = x[k] + step * d[k];
                    moved = moved || x_new[k] != x[k];
                }
                if (!moved) return false;
                if (acceptable && !acceptable(x_new)) continue;
                try {
                    f_new = objective(x_new, g_new);
                } catch (const std::exception&) {
                    continue;
                }
                if (f_new <= res.f + opts.ls_c1 * step * sl + slack) return true;
            }
            return false;
        };
        bool accepted = line_search(slope);
        if (!accepted && !S.empty()) {
            // Quasi-Newton direction failed; retry from scratch.
            S.clear();
            Y.clear();
            rho.clear();
            for (size_t k = 0; k < n; ++k) d[k] = -g[k];
            slope = -dot(g, g);
            accepted = line_search(slope);
        }
        if (!accepted) {
            res.status = LbfgsStatus::line_search_failed;
            break;
        }

        std::vector<double> s(n), y(n);
        for (size_t k = 0; k < n; ++k) {
            s[k] = x_new[k] - x[k];
            y[k] = g_new[k] - g[k];
        }
        const double sy = dot(s, y);
        if (sy > 1e-16 * dot(y, y)) {
            S.push_back(std::move(s));
            Y.push_back(std::move(y));
            rho.push_back(1.0 / sy);
            if (static_cast<int>(S.size()) > opts.memory) {
                S.pop_front();
                Y.pop_front();
                rho.pop_front();
            }
        }

        x = x_new;
        g = g_new;
        res.f = f_new;
        res.grad_norm = inf_norm(g);
        res.iterations = iter + 1;
        if (on_iterate) on_iterate(iter + 1, res.f, res.grad_norm, x);
    }
    if (res.grad_norm <= opts.grad_tol) res.status = LbfgsStatus::converged;
    res.x = std::move(x);
    return res;
}

}  // namespace fig8
