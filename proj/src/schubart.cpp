#include "fig8/schubart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fig8/lbfgs.hpp"

namespace fig8 {

namespace {

CollinearPath decode_collinear(const std::vector<double>& x, const Masses& m,
                               const std::vector<double>& grid) {
    const int N = static_cast<int>(grid.size()) - 1;
    CollinearPath p;
    p.times = grid;
    p.nodes.resize(N + 1);
    const double b = std::exp(x[0]);
    const double c = std::exp(x[1]);
    p.nodes[0] = {-(m.m2 + m.m3) * b / m.m1, b, b};
    for (int k = 1; k < N; ++k) {
        const double x1 = x[2 + 2 * (k - 1)];
        const double x2 = x[3 + 2 * (k - 1)];
        p.nodes[k] = {x1, x2, -(m.m1 * x1 + m.m2 * x2) / m.m3};
    }
    p.nodes[N] = {-c, c, 0.0};
    return p;
}

std::vector<double> encode_collinear(const CollinearPath& p) {
    const int N = p.segments();
    std::vector<double> x(2 + 2 * (N - 1));
    if (!(p.nodes[0][1] > 0.0 && p.nodes[N][1] > 0.0))
        throw std::invalid_argument("boundary nodes do not match the collision chart");
    x[0] = std::log(p.nodes[0][1]);
    x[1] = std::log(p.nodes[N][1]);
    for (int k = 1; k < N; ++k) {
        x[2 + 2 * (k - 1)] = p.nodes[k][0];
        x[3 + 2 * (k - 1)] = p.nodes[k][1];
    }
    return x;
}

std::array<double, 3> interp_nodes(const CollinearPath& p, double t) {
    const auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
    size_t k = it - p.times.begin();
    if (k == 0) k = 1;
    if (k > p.times.size() - 1) k = p.times.size() - 1;
    const double h = p.times[k] - p.times[k - 1];
    const double s = (t - p.times[k - 1]) / h;
    std::array<double, 3> out;
    for (int j = 0; j < 3; ++j)
        out[j] = (1.0 - s) * p.nodes[k - 1][j] + s * p.nodes[k][j];
    return out;
}

CollinearResult solve_collinear(std::vector<double> x0, const std::vector<double>& grid,
                                const Masses& m, Alpha a, const SolveConfig& cfg) {
    const int N = static_cast<int>(grid.size()) - 1;
    auto objective = [&](const std::vector<double>& x, std::vector<double>& g) {
        const CollinearPath p = decode_collinear(x, m, grid);
        const NodeActionResult nr = action_nodes(to_planar(p), m, a, true, true);
        g.assign(x.size(), 0.0);
        const double b = std::exp(x[0]);
        const double c = std::exp(x[1]);
        g[0] = b * (-(m.m2 + m.m3) / m.m1 * nr.node_grad[0][0].real() +
                    nr.node_grad[0][1].real() + nr.node_grad[0][2].real());
        g[1] = c * (-nr.node_grad[N][0].real() + nr.node_grad[N][1].real());
        const double r1 = m.m1 / m.m3, r2 = m.m2 / m.m3;
        for (int k = 1; k < N; ++k) {
            g[2 + 2 * (k - 1)] = nr.node_grad[k][0].real() - r1 * nr.node_grad[k][2].real();
            g[3 + 2 * (k - 1)] = nr.node_grad[k][1].real() - r2 * nr.node_grad[k][2].real();
        }
        return nr.value;
    };

    LbfgsOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.grad_tol = cfg.grad_tol;
    opts.ls_shrink = cfg.ls_shrink;
    opts.ls_c1 = cfg.ls_c1;
    opts.memory = cfg.memory;

    // On a strongly graded grid the kinetic Hessian diagonal spans 1/h
    // over many orders of magnitude, which stalls the quasi-Newton
    // iteration in raw coordinates.  Rescale each variable by the local
    // kinetic stiffness so the scaled Hessian is O(1) on the diagonal.
    const double M = m.m1 + m.m2 + m.m3;
    auto node_w = [&](int k) {
        double w = 0.0;
        if (k > 0) w += 1.0 / (grid[k] - grid[k - 1]);
        if (k < N) w += 1.0 / (grid[k + 1] - grid[k]);
        return std::sqrt(M * w);
    };
    std::vector<double> s(x0.size());
    s[0] = std::max(std::exp(x0[0]), 1e-3) * node_w(0);
    s[1] = std::max(std::exp(x0[1]), 1e-3) * node_w(N);
    for (int k = 1; k < N; ++k) s[2 + 2 * (k - 1)] = s[3 + 2 * (k - 1)] = node_w(k);

    std::vector<double> y0(x0.size());
    for (size_t i = 0; i < x0.size(); ++i) y0[i] = x0[i] * s[i];
    std::vector<double> xbuf(x0.size());
    auto scaled = [&](const std::vector<double>& y, std::vector<double>& g) {
        for (size_t i = 0; i < y.size(); ++i) xbuf[i] = y[i] / s[i];
        const double f = objective(xbuf, g);
        for (size_t i = 0; i < g.size(); ++i) g[i] /= s[i];
        return f;
    };
    LbfgsResult r = lbfgs_minimize(std::move(y0), scaled, opts);
    for (size_t i = 0; i < r.x.size(); ++i) r.x[i] /= s[i];

    CollinearResult out;
    out.path = decode_collinear(r.x, m, grid);
    out.action = r.f;
    out.grad_norm = r.grad_norm;
    out.iterations = r.iterations;
    switch (r.status) {
        case LbfgsStatus::converged: out.status = SolveStatus::converged; break;
        case LbfgsStatus::max_iters: out.status = SolveStatus::max_iters; break;
        case LbfgsStatus::line_search_failed: out.status = SolveStatus::collision_guard; break;
    }
    return out;
}

}  // namespace

DiscretePath to_planar(const CollinearPath& path) {
    DiscretePath out;
    out.times = path.times;
    out.nodes.resize(path.nodes.size());
    for (size_t k = 0; k < path.nodes.size(); ++k)
        for (int j = 0; j < 3; ++j) out.nodes[k][j] = Complex(path.nodes[k][j], 0.0);
    return out;
}

CollinearResult minimize_collinear(const Masses& m, double alpha, double T0, int n_segments,
                                   const SolveConfig& cfg, double grid_power) {
    m.validate();
    if (m.m1 != m.m2) throw std::invalid_argument("collinear solve needs m1 = m2");
    const Alpha a(alpha);
    if (n_segments < 8) throw std::invalid_argument("need at least 8 segments");
    const std::vector<double> grid = graded_grid(T0, n_segments, grid_power);
    const int N = n_segments;

    // Default start: collision at b = 0.3 opening up to the (-1, 1, 0) end.
    std::vector<double> x0(2 + 2 * (N - 1));
    x0[0] = std::log(0.3);
    x0[1] = 0.0;
    {
        const CollinearPath bp = decode_collinear({x0[0], x0[1]}, m,
                                                  std::vector<double>{0.0, T0});
        for (int k = 1; k < N; ++k) {
            const double s = grid[k] / T0;
            for (int j = 0; j < 2; ++j)
                x0[2 + 2 * (k - 1) + j] =
                    (1.0 - s) * bp.nodes[0][j] + s * bp.nodes[1][j];
        }
    }
    return solve_collinear(std::move(x0), grid, m, a, cfg);
}

MonotonicityReport check_monotone(const CollinearPath& path) {
    MonotonicityReport rep;
    rep.x1_increasing = rep.x2_increasing = rep.x3_decreasing = rep.ordered = true;
    double scale = 0.0;
    for (const auto& n : path.nodes)
        for (double q : n) scale = std::max(scale, std::abs(q));
    // Slack absorbs solver-level noise on segments where a coordinate
    // is nearly stationary (x1 barely moves near the collision).
    const double tol = 1e-8 * scale;
    const size_t S = path.nodes.size();
    for (size_t k = 1; k < S; ++k) {
        if (path.nodes[k][0] <= path.nodes[k - 1][0] - tol) rep.x1_increasing = false;
        if (path.nodes[k][1] <= path.nodes[k - 1][1] - tol) rep.x2_increasing = false;
        if (path.nodes[k][2] >= path.nodes[k - 1][2] + tol) rep.x3_decreasing = false;
    }
    for (size_t k = 1; k + 1 < S; ++k) {
        const auto& n = path.nodes[k];
        if (!(n[0] < n[2] && n[2] < n[1])) rep.ordered = false;
    }
    return rep;
}

FullOrbit build_schubart(const CollinearPath& quarter, const Masses& m, double alpha) {
    return from_quarter(to_planar(quarter), m, alpha);
}

double cluster_inertia(const Config& x, const Masses& m) {
    const Complex c = (m.m2 * x[1] + m.m3 * x[2]) / (m.m2 + m.m3);
    return m.m2 * std::norm(x[1] - c) + m.m3 * std::norm(x[2] - c);
}

double collision_kappa(double m2, double m3, Alpha a) {
    const double al = a.value;
    const double m0 = m2 + m3;
    return (2.0 + al) / std::sqrt(2.0 * al) * std::pow(m0, -al / 4.0) *
           std::pow(m2 * m3, (2.0 + al) / 4.0);
}

SundmanFit sundman_fit(const std::vector<double>& times, const std::vector<double>& inertia,
                       double t_lo, double t_hi) {
    if (times.size() != inertia.size())
        throw std::invalid_argument("times and inertia differ in length");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(times[i] > 0.0 && inertia[i] > 0.0)) continue;
        const double lx = std::log(times[i]);
        const double ly = std::log(inertia[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 4) throw std::invalid_argument("fit window holds fewer than 4 samples");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - slope * sx) / n;
    SundmanFit fit;
    fit.exponent = slope;
    fit.kappa = std::exp(icept / slope);
    fit.points = n;
    return fit;
}

std::vector<std::pair<double, double>> collision_inertia_samples(
    const CollinearPath& quarter, const Masses& m, double alpha, double t_lo, double t_hi,
    int points, double t_anchor_fraction) {
    if (!(0.0 < t_lo && t_lo < t_hi)) throw std::invalid_argument("bad sampling window");
    if (points < 2) throw std::invalid_argument("need at least 2 sample points");
    const double T0 = quarter.times.back();
    if (t_hi >= t_anchor_fraction * T0)
        throw std::invalid_argument("window must lie below the anchor time");

    // Anchor node: first grid point at or above the anchor fraction.
    size_t ka = 1;
    while (ka + 1 < quarter.times.size() && quarter.times[ka] < t_anchor_fraction * T0) ++ka;
    if (ka + 1 >= quarter.times.size())
        throw std::invalid_argument("anchor time too close to the endpoint");

    // Second-order velocity on the nonuniform grid.
    const double h1 = quarter.times[ka] - quarter.times[ka - 1];
    const double h2 = quarter.times[ka + 1] - quarter.times[ka];
    Config x0;
    Velocity v0;
    for (int j = 0; j < 3; ++j) {
        const double xm = quarter.nodes[ka - 1][j];
        const double xc = quarter.nodes[ka][j];
        const double xp = quarter.nodes[ka + 1][j];
        x0[j] = Complex(xc, 0.0);
        const double v = -h2 / (h1 * (h1 + h2)) * xm + (h2 - h1) / (h1 * h2) * xc +
                         h1 / (h2 * (h1 + h2)) * xp;
        v0[j] = Complex(v, 0.0);
    }

    // Backward pass through a geometric ladder of times.  The ladder is
    // walked one rung at a time: if the continued trajectory reaches an
    // exact collision before the bottom of the window, keep whatever
    // samples were collected above it.
    std::vector<std::pair<double, double>> out;
    Config xc = x0;
    Velocity vc = v0;
    double tcur = quarter.times[ka];
    for (int i = 0; i < points; ++i) {
        const double tnext =
            t_hi * std::pow(t_lo / t_hi, static_cast<double>(i) / (points - 1));
        try {
            std::vector<Velocity> vv;
            const SampledTrajectory leg = integrate_trajectory(
                xc, vc, m, Alpha(alpha), {tcur, tnext}, &vv, 1e-12);
            xc = leg.configs.back();
            vc = vv.back();
            tcur = tnext;
            out.emplace_back(tnext, cluster_inertia(xc, m));
        } catch (const CollisionError&) {
            break;
        }
    }
    std::sort(out.begin(), out.end());

    // The anchor state carries the O(h^2) discretization error of the
    // minimizer, so its backward continuation meets the collision at a
    // slightly shifted time tc instead of exactly at 0.  Since
    // I_K^{1/p} with p = 4/(2+alpha) is asymptotically linear in
    // (t - tc), a linear regression recovers tc; iterate, discarding
    // samples on the wrong side of the estimated collision.
    const double p = 4.0 / (2.0 + alpha);
    double tc = 0.0;
    for (int pass = 0; pass < 3; ++pass) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& [t, I] : out) {
            if (t - tc <= 0.0) continue;
            const double y = std::pow(I, 1.0 / p);
            sx += t;
            sy += y;
            sxx += t * t;
            sxy += t * y;
            ++n;
        }
        if (n < 4) break;
        const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (!(a > 0.0)) break;
        const double b = (sy - a * sx) / n;
        tc = -b / a;
    }
    std::vector<std::pair<double, double>> shifted;
    for (const auto& [t, I] : out)
        if (t - tc > 0.0) shifted.emplace_back(t - tc, I);
    return shifted;
}

namespace {

Config planar_interp(const DiscretePath& p, double t) {
    const auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
    size_t k = it - p.times.begin();
    if (k == 0) k = 1;
    if (k > p.times.size() - 1) k = p.times.size() - 1;
    const double s = (t - p.times[k - 1]) / (p.times[k] - p.times[k - 1]);
    Config out;
    for (int j = 0; j < 3; ++j)
        out[j] = (1.0 - s) * p.nodes[k - 1][j] + s * p.nodes[k][j];
    return out;
}

OmegaParams prolong_planar(const OmegaParams& params, const Masses& m,
                           const std::vector<double>& grid_old,
                           const std::vector<double>& grid_new) {
    const DiscretePath path = decode(params, m, grid_old);
    DiscretePath fine;
    fine.times = grid_new;
    fine.nodes.resize(grid_new.size());
    for (size_t k = 0; k < grid_new.size(); ++k) fine.nodes[k] = planar_interp(path, grid_new[k]);
    fine.nodes.front() = path.nodes.front();
    fine.nodes.back() = path.nodes.back();
    return encode(fine, m);
}

CollinearPath prolong_collinear(const CollinearPath& path, const std::vector<double>& grid_new) {
    CollinearPath fine;
    fine.times = grid_new;
    fine.nodes.resize(grid_new.size());
    for (size_t k = 0; k < grid_new.size(); ++k) fine.nodes[k] = interp_nodes(path, grid_new[k]);
    fine.nodes.front() = path.nodes.front();
    fine.nodes.back() = path.nodes.back();
    return fine;
}


}  // namespace

ConditionReport condition_test(const Masses& m, double T0, const std::vector<int>& levels,
                               const SolveConfig& cfg, int n_starts) {
    if (levels.size() < 3) throw std::invalid_argument("need at least 3 grid levels");
    for (size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1])
            throw std::invalid_argument("levels must be strictly increasing");

    ConditionReport rep;
    rep.levels = levels;

    // Collinear ladder, warm-started upward.
    CollinearResult coll = minimize_collinear(m, 1.0, T0, levels[0], cfg);
    rep.schubart_action.push_back(coll.action);
    for (size_t i = 1; i < levels.size(); ++i) {
        const CollinearPath warm =
            prolong_collinear(coll.path, graded_grid(T0, levels[i], 3.0));
        coll = solve_collinear(encode_collinear(warm), warm.times, m, Alpha(1.0), cfg);
        rep.schubart_action.push_back(coll.action);
    }

    // Planar ladder on the same graded grids.
    SolveConfig pcfg = cfg;
    pcfg.precondition = true;
    ProblemSetup setup{m, 1.0, T0, graded_grid(T0, levels[0], 3.0)};
    SolveResult planar = multistart(setup, pcfg, n_starts);
    rep.omega_action.push_back(planar.action);
    for (size_t i = 1; i < levels.size(); ++i) {
        ProblemSetup fine{m, 1.0, T0, graded_grid(T0, levels[i], 3.0)};
        const OmegaParams warm = prolong_planar(planar.params, m, setup.grid, fine.grid);
        planar = minimize(warm, fine, pcfg);
        setup = fine;
        rep.omega_action.push_back(planar.action);
    }

    auto summarize = [](const std::vector<double>& A, double& order, double& contraction,
                        double& extrap, double& unc) {
        const size_t n = A.size();
        const double d1 = A[n - 3] - A[n - 2];
        const double d2 = A[n - 2] - A[n - 1];
        contraction = std::abs(d2) > 0.0 ? std::abs(d1) / std::abs(d2) : HUGE_VAL;
        order = std::log2(std::max(contraction, 1e-300));
        extrap = contraction > 1.0 ? A[n - 1] - d2 / (contraction - 1.0) : A[n - 1];
        unc = std::abs(d2);
    };
    double unc_s = 0.0, unc_o = 0.0;
    summarize(rep.schubart_action, rep.schubart_order, rep.schubart_contraction,
              rep.schubart_extrap, unc_s);
    summarize(rep.omega_action, rep.omega_order, rep.omega_contraction, rep.omega_extrap,
              unc_o);
    rep.gap = rep.schubart_extrap - rep.omega_extrap;
    rep.uncertainty = unc_s + unc_o;
    return rep;
}

}  // namespace fig8
