#include "fig8/minimize.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "fig8/lbfgs.hpp"
#include "fig8/shape.hpp"

namespace fig8 {

ProblemSetup make_setup(const Masses& m, double alpha, double T0, int n_segments) {
    m.validate();
    Alpha check(alpha);
    (void)check;
    if (n_segments < 8) throw std::invalid_argument("need at least 8 segments");
    return {m, alpha, T0, uniform_grid(T0, n_segments)};
}

OmegaParams default_init(const ProblemSetup& setup) {
    const int N = setup.segments();
    OmegaParams p;
    p.u = 0.0;
    p.v = 0.0;
    p.logc = 0.0;
    p.theta = M_PI / 2.0;

    const Config a = centered({Complex(0, 0), Complex(1, 0), Complex(2, 0)}, setup.m);
    const Complex e = std::polar(1.0, p.theta);
    const Config b = {-e, e, Complex(0, 0)};

    p.interior.resize(4 * (N - 1));
    for (int k = 1; k < N; ++k) {
        const double s = static_cast<double>(k) / N;
        const double lift = 0.3 * std::sin(M_PI * s);
        const Complex x1 = (1.0 - s) * a[0] + s * b[0] + Complex(0, lift);
        const Complex x2 = (1.0 - s) * a[1] + s * b[1] - Complex(0, lift);
        double* q = &p.interior[4 * (k - 1)];
        q[0] = x1.real();
        q[1] = x1.imag();
        q[2] = x2.real();
        q[3] = x2.imag();
    }
    return p;
}

OmegaParams conjugate(const OmegaParams& p) {
    OmegaParams q = p;
    q.theta = -q.theta;
    for (size_t i = 0; i < q.interior.size(); i += 4) {
        q.interior[i + 1] = -q.interior[i + 1];
        q.interior[i + 3] = -q.interior[i + 3];
    }
    return q;
}

namespace {

// Smallest quadrature-point distance relative to the local sqrt(I).
double min_normalized_distance(const DiscretePath& path, const Masses& m) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < path.nodes.size(); ++k)
        for (int p = 0; p < 16; ++p) {
            const double s = (p + 0.5) / 16.0;
            Config c;
            for (int j = 0; j < 3; ++j)
                c[j] = (1.0 - s) * path.nodes[k][j] + s * path.nodes[k + 1][j];
            const double I = moment_of_inertia(c, m);
            if (I > 0.0) best = std::min(best, min_pair_distance(c) / std::sqrt(I));
        }
    return best;
}

bool below_syzygy_plane(const DiscretePath& path, const Masses& m) {
    double integral = 0.0;
    for (size_t k = 0; k < path.nodes.size(); ++k)
        integral += project(path.nodes[k], m).w3;
    return integral < 0.0;
}

SolveConfig validated(const SolveConfig& cfg) {
    if (!(cfg.grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
    if (!(cfg.ls_shrink > 0.0 && cfg.ls_shrink < 1.0))
        throw std::invalid_argument("ls_shrink must be in (0,1)");
    if (!(cfg.ls_c1 > 0.0 && cfg.ls_c1 < 1.0))
        throw std::invalid_argument("ls_c1 must be in (0,1)");
    if (cfg.memory < 1) throw std::invalid_argument("memory must be >= 1");
    return cfg;
}

double param_norm(const OmegaParams& p) {
    double s = p.u * p.u + p.v * p.v + p.logc * p.logc + p.theta * p.theta;
    for (double q : p.interior) s += q * q;
    return std::sqrt(s);
}

}  // namespace

SolveResult minimize(const OmegaParams& init, const ProblemSetup& setup,
                     const SolveConfig& cfg0, std::ostream* log) {
    const SolveConfig cfg = validated(cfg0);
    const Alpha a(setup.alpha);

    LbfgsOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.grad_tol = cfg.grad_tol;
    opts.ls_shrink = cfg.ls_shrink;
    opts.ls_c1 = cfg.ls_c1;
    opts.memory = cfg.memory;

    auto objective = [&](const std::vector<double>& x, std::vector<double>& g) {
        ActionEvaluation ev = action_gradient(unpack(x), setup.m, a, setup.grid);
        g = ev.gradient;
        return ev.value;
    };
    auto guard = [&](const std::vector<double>& x) {
        const DiscretePath path = decode(unpack(x), setup.m, setup.grid);
        return min_normalized_distance(path, setup.m) >= 1e-10;
    };
    auto logger = [&](int iter, double f, double gnorm, const std::vector<double>& x) {
        if (!log) return;
        const auto [d, t] = min_pair_distance(decode(unpack(x), setup.m, setup.grid));
        (void)t;
        (*log) << "iter " << iter << " action " << f << " grad_norm " << gnorm
               << " min_dist " << d << "\n";
    };

    std::function<void(int, double, double, const std::vector<double>&)> cb;
    if (log) cb = logger;

    LbfgsResult r;
    if (cfg.precondition) {
        // Rescale each chart variable by the local kinetic stiffness so
        // the Hessian diagonal is O(1) even on strongly graded grids.
        const std::vector<double>& grid = setup.grid;
        const int N = setup.segments();
        const double M = setup.m.m1 + setup.m.m2 + setup.m.m3;
        auto node_w = [&](int k) {
            double w = 0.0;
            if (k > 0) w += 1.0 / (grid[k] - grid[k - 1]);
            if (k < N) w += 1.0 / (grid[k + 1] - grid[k]);
            return std::sqrt(M * w);
        };
        std::vector<double> x0 = pack(init);
        std::vector<double> s(x0.size());
        const double b0 = std::max({std::exp(init.u), std::exp(init.v), 1e-3});
        const double c0 = std::max(std::exp(init.logc), 1e-3);
        s[0] = s[1] = b0 * node_w(0);
        s[2] = s[3] = c0 * node_w(N);
        for (int k = 1; k < N; ++k)
            for (int j = 0; j < 4; ++j) s[4 + 4 * (k - 1) + j] = node_w(k);

        std::vector<double> y0(x0.size());
        for (size_t i = 0; i < x0.size(); ++i) y0[i] = x0[i] * s[i];
        std::vector<double> xbuf(x0.size());
        auto scaled_obj = [&](const std::vector<double>& y, std::vector<double>& g) {
            for (size_t i = 0; i < y.size(); ++i) xbuf[i] = y[i] / s[i];
            const double f = objective(xbuf, g);
            for (size_t i = 0; i < g.size(); ++i) g[i] /= s[i];
            return f;
        };
        auto scaled_guard = [&](const std::vector<double>& y) {
            std::vector<double> x(y.size());
            for (size_t i = 0; i < y.size(); ++i) x[i] = y[i] / s[i];
            return guard(x);
        };
        std::function<void(int, double, double, const std::vector<double>&)> scaled_cb;
        if (log)
            scaled_cb = [&](int iter, double f, double gnorm, const std::vector<double>& y) {
                std::vector<double> x(y.size());
                for (size_t i = 0; i < y.size(); ++i) x[i] = y[i] / s[i];
                logger(iter, f, gnorm, x);
            };
        r = lbfgs_minimize(std::move(y0), scaled_obj, opts, scaled_guard, scaled_cb);
        for (size_t i = 0; i < r.x.size(); ++i) r.x[i] /= s[i];
    } else {
        r = lbfgs_minimize(pack(init), objective, opts, guard, cb);
    }

    SolveResult out;
    out.params = unpack(r.x);
    if (below_syzygy_plane(decode(out.params, setup.m, setup.grid), setup.m))
        out.params = conjugate(out.params);

    const ActionEvaluation ev = action_gradient(out.params, setup.m, a, setup.grid);
    out.action = ev.value;
    double gnorm = 0.0;
    for (double g : ev.gradient) gnorm = std::max(gnorm, std::abs(g));
    out.grad_norm = gnorm;
    out.min_pair_distance = ev.min_pair_distance;
    out.min_pair_time = ev.min_pair_time;
    out.iterations = r.iterations;
    switch (r.status) {
        case LbfgsStatus::converged: out.status = SolveStatus::converged; break;
        case LbfgsStatus::max_iters: out.status = SolveStatus::max_iters; break;
        case LbfgsStatus::line_search_failed: out.status = SolveStatus::collision_guard; break;
    }
    return out;
}

SolveResult multistart(const ProblemSetup& setup, const SolveConfig& cfg, int n_starts,
                       std::vector<SolveResult>* all) {
    if (n_starts < 1) throw std::invalid_argument("n_starts must be >= 1");
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const OmegaParams base = default_init(setup);
    SolveResult best;
    bool have_best = false;

    for (int s = 0; s < n_starts; ++s) {
        OmegaParams start = base;
        if (s > 0) {
            start.u += 0.3 * gauss(rng);
            start.v += 0.3 * gauss(rng);
            start.logc += 0.3 * gauss(rng);
            start.theta += 0.5 * gauss(rng);
            for (double& q : start.interior) q += 0.2 * gauss(rng);
        }
        SolveResult r = minimize(start, setup, cfg);
        if (all) all->push_back(r);
        if (r.status != SolveStatus::converged) continue;
        const bool better =
            !have_best || r.action < best.action - 1e-12 * std::abs(best.action) ||
            (std::abs(r.action - best.action) <= 1e-12 * std::abs(best.action) &&
             param_norm(r.params) < param_norm(best.params));
        if (better) {
            best = r;
            have_best = true;
        }
    }
    if (!have_best) {
        // No start converged; return the last attempt's diagnostics.
        return minimize(base, setup, cfg);
    }
    return best;
}

SolveResult continue_alpha(const SolveResult& from, const ProblemSetup& setup_at_start,
                           double alpha_target, int steps, const SolveConfig& cfg,
                           std::vector<double>* min_dist_per_step) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    Alpha check(alpha_target);
    (void)check;
    SolveResult cur = from;
    ProblemSetup setup = setup_at_start;
    const double a0 = setup_at_start.alpha;
    for (int s = 1; s <= steps; ++s) {
        setup.alpha = a0 + (alpha_target - a0) * s / steps;
        cur = minimize(cur.params, setup, cfg);
        if (min_dist_per_step) min_dist_per_step->push_back(cur.min_pair_distance);
        if (cur.status == SolveStatus::collision_guard) break;
    }
    return cur;
}

Velocity discrete_velocity_start(const DiscretePath& path, const Masses& m, Alpha a) {
    const NodeActionResult nr = action_nodes(path, m, a, true, true);
    Velocity v;
    for (int j = 0; j < 3; ++j) v[j] = -nr.node_grad[0][j] / m[j];
    return v;
}

}  // namespace fig8
