#include "fig8/deform.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fig8/lbfgs.hpp"

namespace fig8 {

double kappa(double m2, double m3, Alpha a) {
    if (!(m2 > 0.0 && m3 > 0.0)) throw std::invalid_argument("masses must be positive");
    const double al = a.value;
    const double m0 = m2 + m3;
    return (2.0 + al) / std::sqrt(2.0 * al) * std::pow(m0, -al / 4.0) *
           std::pow(m2 * m3, (2.0 + al) / 4.0);
}

double BinaryCentralConfig::rho2() const { return std::sqrt(m3 / (m2 * (m2 + m3))); }
double BinaryCentralConfig::rho3() const { return std::sqrt(m2 / (m3 * (m2 + m3))); }
Complex BinaryCentralConfig::sigma2() const { return std::polar(rho2(), phi3 + M_PI); }
Complex BinaryCentralConfig::sigma3() const { return std::polar(rho3(), phi3); }

std::pair<Complex, Complex> homothetic_positions(const BinaryCentralConfig& s, Alpha a,
                                                 double t) {
    const double g = std::pow(kappa(s.m2, s.m3, a) * t, 2.0 / (2.0 + a.value));
    return {g * s.sigma2(), g * s.sigma3()};
}

std::pair<Complex, Complex> homothetic_velocities(const BinaryCentralConfig& s, Alpha a,
                                                  double t) {
    const double kp = kappa(s.m2, s.m3, a);
    const double pw = 2.0 / (2.0 + a.value);
    const double gd = pw * kp * std::pow(kp * t, pw - 1.0);
    return {gd * s.sigma2(), gd * s.sigma3()};
}

namespace {

double parabolic_prefactor(const ParabolicArc& arc) {
    return (2.0 + arc.alpha) / std::sqrt(2.0 * arc.alpha) * std::sqrt(arc.M);
}

}  // namespace

Complex parabolic_position(const ParabolicArc& arc, double t) {
    const double pw = 2.0 / (2.0 + arc.alpha);
    const double r = std::pow(parabolic_prefactor(arc) * std::abs(t), pw);
    return std::polar(r, t > 0.0 ? arc.psi_plus : arc.psi_minus);
}

Complex parabolic_velocity(const ParabolicArc& arc, double t) {
    if (t == 0.0) throw std::invalid_argument("velocity undefined at the collision");
    const double pw = 2.0 / (2.0 + arc.alpha);
    const double C = parabolic_prefactor(arc);
    const double rdot = pw * C * std::pow(C * std::abs(t), pw - 1.0);
    return std::polar(t > 0.0 ? rdot : -rdot, t > 0.0 ? arc.psi_plus : arc.psi_minus);
}

double parabolic_action(const ParabolicArc& arc, double T) {
    // Zero energy makes the Lagrangian equal 2V along the arc.
    const double al = arc.alpha;
    const double q = 2.0 * al / (2.0 + al);
    const double C = parabolic_prefactor(arc);
    return 2.0 * arc.M / (al * std::pow(C, q)) * std::pow(T, 1.0 - q) / (1.0 - q);
}

DeformationReport deform_split(const BinaryCentralConfig& sbar, const BinaryCentralConfig& sigma,
                               double eps, double T, Alpha a) {
    if (sbar.m2 != sigma.m2 || sbar.m3 != sigma.m3)
        throw std::invalid_argument("mass pairs of sbar and sigma disagree");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const double al = a.value;
    const double pw = 2.0 / (2.0 + al);
    const double tp = std::pow(eps, (2.0 + al) / 2.0);  // plateau end
    if (tp + eps > T) throw std::invalid_argument("deformation window exceeds the horizon");

    const double kp = kappa(sbar.m2, sbar.m3, a);
    const Complex sb23 = sbar.sigma2() - sbar.sigma3();
    const Complex sg23 = sigma.sigma2() - sigma.sigma3();
    const double a23 = std::pow(kp, pw) * std::abs(sb23);
    const double c23 =
        std::pow(kp, pw) * (sb23.real() * sg23.real() + sb23.imag() * sg23.imag());
    const double s2 = std::norm(sg23);
    const double coef = sbar.m2 * sbar.m3 / al;

    DeformationReport rep;
    rep.epsilon = eps;

    // Plateau: integrable 1/t^{2a/(2+a)} singularity of the undeformed
    // potential at t = 0.
    boost::math::quadrature::tanh_sinh<double> ts;
    rep.A1 = coef * ts.integrate(
                        [&](double t) {
                            const double u = std::pow(t, pw);
                            const double def = a23 * a23 * u * u + 2.0 * eps * c23 * u + eps * eps * s2;
                            return std::pow(def, -al / 2.0) - std::pow(a23 * u, -al);
                        },
                        0.0, tp);

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    rep.A2 = coef * GK::integrate(
                        [&](double t) {
                            const double f = 1.0 + (tp - t) / eps;
                            const Complex base = std::pow(kp * t, pw) * sb23;
                            const double rd = std::abs(base + eps * f * sg23);
                            return std::pow(rd, -al) - std::pow(std::abs(base), -al);
                        },
                        tp, tp + eps, 10);

    const Complex sgv[2] = {sigma.sigma2(), sigma.sigma3()};
    const Complex sbv[2] = {sbar.sigma2(), sbar.sigma3()};
    const double mv[2] = {sbar.m2, sbar.m3};
    rep.A3 = GK::integrate(
        [&](double t) {
            const double gd = pw * kp * std::pow(kp * t, pw - 1.0);
            double val = 0.0;
            for (int k = 0; k < 2; ++k) {
                const Complex qdot = gd * sbv[k];
                val += 0.5 * mv[k] * (std::norm(qdot - sgv[k]) - std::norm(qdot));
            }
            return val;
        },
        tp, tp + eps, 10);

    rep.total = rep.A1 + rep.A2 + rep.A3;
    return rep;
}

std::vector<DeformationReport> deform_sweep(const BinaryCentralConfig& sbar,
                                            const BinaryCentralConfig& sigma, double eps_lo,
                                            double eps_hi, double T, Alpha a) {
    if (!(0.0 < eps_lo && eps_lo < eps_hi))
        throw std::invalid_argument("need 0 < eps_lo < eps_hi");
    const double decades = std::log10(eps_hi / eps_lo);
    const int n = std::max(2, static_cast<int>(std::lround(8.0 * decades))) + 1;
    std::vector<DeformationReport> out;
    for (int i = 0; i < n; ++i) {
        const double eps = eps_lo * std::pow(eps_hi / eps_lo, static_cast<double>(i) / (n - 1));
        out.push_back(deform_split(sbar, sigma, eps, T, a));
    }
    // Slope of log|A1| vs log eps, discarding the largest decade.
    const double cut = eps_hi / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& r : out) {
        if (r.epsilon > cut * (1.0 + 1e-12) || !(std::abs(r.A1) > 0.0)) continue;
        const double lx = std::log(r.epsilon);
        const double ly = std::log(std::abs(r.A1));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt >= 2) {
        const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        for (auto& r : out) r.a1_exponent = slope;
    }
    return out;
}

DiscretePath blow_up(const DiscretePath& path, double lambda, Alpha a) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double scale = std::pow(lambda, -2.0 / (2.0 + a.value));
    DiscretePath out;
    out.times.resize(path.times.size());
    out.nodes.resize(path.nodes.size());
    for (size_t k = 0; k < path.times.size(); ++k) {
        out.times[k] = path.times[k] / lambda;
        for (int j = 0; j < 3; ++j) out.nodes[k][j] = scale * path.nodes[k][j];
    }
    return out;
}

PairPolarSeries pair_polar_series(const SampledTrajectory& traj,
                                  const std::vector<Velocity>& vels, const Masses& m) {
    if (traj.configs.size() != vels.size())
        throw std::invalid_argument("trajectory and velocities differ in length");
    PairPolarSeries s;
    s.times = traj.times;
    const double m0 = m.m2 + m.m3;
    double prev_theta = 0.0;
    for (size_t i = 0; i < traj.configs.size(); ++i) {
        const Config& x = traj.configs[i];
        const Velocity& v = vels[i];
        const Complex c = (m.m2 * x[1] + m.m3 * x[2]) / m0;
        const Complex cd = (m.m2 * v[1] + m.m3 * v[2]) / m0;
        const Complex r2 = x[1] - c, r3 = x[2] - c;
        const Complex v2 = v[1] - cd, v3 = v[2] - cd;
        s.JK.push_back(m.m2 * wedge(r2, v2) + m.m3 * wedge(r3, v3));
        s.IK.push_back(m.m2 * std::norm(r2) + m.m3 * std::norm(r3));
        double th = std::arg(r3);
        if (i > 0) {
            // unwrap against the previous sample
            while (th - prev_theta > M_PI) th -= 2.0 * M_PI;
            while (th - prev_theta < -M_PI) th += 2.0 * M_PI;
        }
        prev_theta = th;
        s.theta3.push_back(th);
        s.theta3_dot.push_back(std::norm(r3) > 0.0 ? wedge(r3, v3) / std::norm(r3) : 0.0);
    }
    return s;
}

PolarLimits polar_limits(const PairPolarSeries& s) {
    if (s.times.size() < 6) throw std::invalid_argument("series too short");
    for (size_t i = 1; i < s.times.size(); ++i)
        if (!(s.times[i] > s.times[i - 1]))
            throw std::invalid_argument("series times must increase");
    if (!(s.IK.front() < 1e-4 * s.IK.back()))
        throw std::invalid_argument("series does not approach a binary collision");

    PolarLimits lim;
    lim.theta3_plus = s.theta3.front();
    double td_max = 0.0;
    for (double td : s.theta3_dot) td_max = std::max(td_max, std::abs(td));
    if (td_max == 0.0 || std::abs(s.theta3_dot.front()) < 1e-12 * td_max) {
        lim.theta_dot_vanishes = true;
        lim.decay_exponent = std::numeric_limits<double>::infinity();
        if (td_max == 0.0) return lim;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < s.times.size(); ++i) {
        if (!(std::abs(s.theta3_dot[i]) > 0.0) || !(s.times[i] > 0.0)) continue;
        const double lx = std::log(s.times[i]);
        const double ly = std::log(std::abs(s.theta3_dot[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n >= 4) {
        lim.decay_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        lim.theta_dot_vanishes = lim.decay_exponent > 0.0;
    }
    return lim;
}

namespace {

// One-center problem: discrete action of a nodal path with exact
// segment kinetic energy and two-point Gauss potential, subdividing
// segments whose quadrature radius is small.
struct KeplerNodeAction {
    double value = 0.0;
    std::vector<Complex> node_grad;  // d(action)/d(node) as (d/dRe, d/dIm)
};

constexpr double kXi[2] = {0.21132486540518711775, 0.78867513459481288225};

KeplerNodeAction kepler_action_nodes(const std::vector<Complex>& nodes,
                                     const std::vector<double>& times, double M, double al) {
    const size_t N = nodes.size() - 1;
    KeplerNodeAction out;
    out.node_grad.assign(nodes.size(), Complex(0, 0));
    const double r_ref = std::abs(nodes.back());

    for (size_t k = 0; k < N; ++k) {
        const double h = times[k + 1] - times[k];
        const Complex d = nodes[k + 1] - nodes[k];
        out.value += 0.5 * std::norm(d) / h;
        out.node_grad[k] -= d / h;
        out.node_grad[k + 1] += d / h;

        bool close = false;
        for (double xi : kXi)
            if (std::abs(nodes[k] + xi * d) < 1e-3 * r_ref) close = true;
        const int parts = close ? 8 : 1;
        for (int p = 0; p < parts; ++p)
            for (double xi : kXi) {
                const double srel = (p + xi) / parts;
                const Complex g = nodes[k] + srel * d;
                const double r = std::abs(g);
                const double w = 0.5 * h / parts;
                out.value += w * M / (al * std::pow(r, al));
                const Complex dU = -M * std::pow(r, -al - 2.0) * g;
                out.node_grad[k] += w * (1.0 - srel) * dU;
                out.node_grad[k + 1] += w * srel * dU;
            }
    }
    return out;
}

using KState = std::array<double, 5>;

struct KeplerRhs {
    double M, al;
    void operator()(const KState& y, KState& dy, double) const {
        const double r = std::hypot(y[0], y[1]);
        const double f = -M * std::pow(r, -al - 2.0);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = f * y[0];
        dy[3] = f * y[1];
        dy[4] = 0.5 * (y[2] * y[2] + y[3] * y[3]) + M / (al * std::pow(r, al));
    }
};

struct KeplerFloorHit {};

// Optional floor radius: trial shooting trajectories that dive toward
// the center would otherwise stall the adaptive stepper.
KState kepler_integrate(KState y, double t0, double t1, double M, double al,
                        double r_floor = 0.0) {
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<KState>());
    if (r_floor > 0.0) {
        auto watch = [r_floor](const KState& s, double) {
            if (std::hypot(s[0], s[1]) < r_floor) throw KeplerFloorHit{};
        };
        ode::integrate_adaptive(stepper, KeplerRhs{M, al}, y, t0, t1, (t1 - t0) / 256.0,
                                watch);
    } else {
        ode::integrate_adaptive(stepper, KeplerRhs{M, al}, y, t0, t1, (t1 - t0) / 256.0);
    }
    return y;
}

}  // namespace

KeplerArc kepler_deform(double M, Alpha a, double psi, double psi_plus, double T,
                        const std::vector<double>& grid) {
    if (!(M > 0.0 && T > 0.0)) throw std::invalid_argument("M and T must be positive");
    const double al = a.value;
    const double dpsi = std::abs(psi - psi_plus);
    if (dpsi > M_PI + 1e-12 || (al == 1.0 && dpsi >= M_PI - 1e-12))
        throw std::invalid_argument("ray angle out of range");
    if (grid.size() < 9 || grid.front() != 0.0 ||
        std::abs(grid.back() - T) > 1e-12 * std::max(1.0, T))
        throw std::invalid_argument("grid must run from 0 to T with at least 8 segments");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must increase");

    const ParabolicArc arc{M, al, psi_plus, psi_plus};
    const Complex target = parabolic_position(arc, T);
    const int N = static_cast<int>(grid.size()) - 1;
    const Complex e_psi = std::polar(1.0, psi);

    // Discrete minimization: unknowns are the initial radius on the psi
    // ray and the interior nodes.
    std::vector<double> x0(1 + 2 * (N - 1));
    x0[0] = 0.2 * std::abs(target);
    for (int k = 1; k < N; ++k) {
        const double s = std::pow(grid[k] / T, 2.0 / (2.0 + al));
        const double r = std::abs(parabolic_position(arc, grid[k])) + x0[0] * (1.0 - s);
        const double th = psi + (psi_plus - psi) * s;
        x0[1 + 2 * (k - 1)] = r * std::cos(th);
        x0[2 + 2 * (k - 1)] = r * std::sin(th);
    }

    std::vector<Complex> nodes(N + 1);
    auto decode_nodes = [&](const std::vector<double>& x) {
        nodes[0] = x[0] * e_psi;
        for (int k = 1; k < N; ++k)
            nodes[k] = Complex(x[1 + 2 * (k - 1)], x[2 + 2 * (k - 1)]);
        nodes[N] = target;
    };
    auto objective = [&](const std::vector<double>& x, std::vector<double>& g) {
        decode_nodes(x);
        const KeplerNodeAction na = kepler_action_nodes(nodes, grid, M, al);
        g.assign(x.size(), 0.0);
        g[0] = na.node_grad[0].real() * e_psi.real() + na.node_grad[0].imag() * e_psi.imag();
        for (int k = 1; k < N; ++k) {
            g[1 + 2 * (k - 1)] = na.node_grad[k].real();
            g[2 + 2 * (k - 1)] = na.node_grad[k].imag();
        }
        return na.value;
    };

    // Kinetic stiffness preconditioning, as in the chart solvers.
    auto node_w = [&](int k) {
        double w = 0.0;
        if (k > 0) w += 1.0 / (grid[k] - grid[k - 1]);
        if (k < N) w += 1.0 / (grid[k + 1] - grid[k]);
        return std::sqrt(w);
    };
    std::vector<double> sc(x0.size());
    sc[0] = node_w(0);
    for (int k = 1; k < N; ++k) sc[1 + 2 * (k - 1)] = sc[2 + 2 * (k - 1)] = node_w(k);
    std::vector<double> y0(x0.size());
    for (size_t i = 0; i < x0.size(); ++i) y0[i] = x0[i] * sc[i];
    std::vector<double> xbuf(x0.size());
    auto scaled = [&](const std::vector<double>& y, std::vector<double>& g) {
        for (size_t i = 0; i < y.size(); ++i) xbuf[i] = y[i] / sc[i];
        const double f = objective(xbuf, g);
        for (size_t i = 0; i < g.size(); ++i) g[i] /= sc[i];
        return f;
    };
    LbfgsOptions opts;
    opts.grad_tol = 1e-9;
    // The initial point must stay on the psi ray proper; a negative
    // radius would jump to the opposite ray.
    auto guard = [&](const std::vector<double>& y) { return y[0] >= 0.0; };
    LbfgsResult r = lbfgs_minimize(std::move(y0), scaled, opts, guard);
    for (size_t i = 0; i < r.x.size(); ++i) r.x[i] /= sc[i];
    decode_nodes(r.x);

    // Shooting polish from a mid-trajectory anchor.  Shooting from
    // either end alone is hopeless for grazing arcs: the state near the
    // close approach is violently sensitive to the far boundary data.
    // Unknowns are position and velocity at the anchor time; residuals
    // are the two natural conditions at t = 0 (point on the psi ray,
    // velocity orthogonal to it, since the free radius makes the
    // stationary initial velocity transverse) and endpoint closure at T.
    int ka = 1;
    while (ka < N - 1 && grid[ka] < 0.1 * T) ++ka;
    const double ta = grid[ka];
    const double r_floor = 1e-9 * std::abs(target);
    std::array<double, 4> z;
    z[0] = nodes[ka].real();
    z[1] = nodes[ka].imag();
    {
        // central difference on the nonuniform grid
        const double hm = grid[ka] - grid[ka - 1], hp = grid[ka + 1] - grid[ka];
        const Complex va = (nodes[ka + 1] * (hm * hm) - nodes[ka - 1] * (hp * hp) +
                            nodes[ka] * (hp * hp - hm * hm)) /
                           (hm * hp * (hm + hp));
        z[2] = va.real();
        z[3] = va.imag();
    }
    const double tscale = std::abs(target);
    KState y0s{};
    auto shoot = [&](const std::array<double, 4>& zz, std::array<double, 4>& res) {
        try {
            KState y{zz[0], zz[1], zz[2], zz[3], 0.0};
            const KState y0 = kepler_integrate(y, ta, 0.0, M, al, r_floor);
            const Complex g0(y0[0], y0[1]), v0(y0[2], y0[3]);
            res[0] = wedge(e_psi, g0) / std::max(std::abs(g0), 1e-300);
            if (e_psi.real() * g0.real() + e_psi.imag() * g0.imag() < 0.0)
                res[0] = 2.0 - res[0];  // wrong ray: keep the residual away from zero
            res[1] = (e_psi.real() * v0.real() + e_psi.imag() * v0.imag()) /
                     std::max(std::abs(v0), 1e-300);
            const KState yT = kepler_integrate(y, ta, T, M, al, r_floor);
            res[2] = (yT[0] - target.real()) / tscale;
            res[3] = (yT[1] - target.imag()) / tscale;
            return y0;
        } catch (const KeplerFloorHit&) {
            res.fill(std::numeric_limits<double>::quiet_NaN());
            return KState{};
        }
    };
    auto rnorm = [](const std::array<double, 4>& r4) {
        return std::sqrt(r4[0] * r4[0] + r4[1] * r4[1] + r4[2] * r4[2] + r4[3] * r4[3]);
    };
    std::array<double, 4> f;
    y0s = shoot(z, f);
    for (int it = 0; it < 60 && rnorm(f) > 1e-12; ++it) {
        double J[4][4];
        std::array<double, 4> fp;
        bool bad = false;
        for (int j = 0; j < 4; ++j) {
            auto zp = z;
            const double h = 1e-7 * std::max(std::abs(z[j]), 0.01);
            zp[j] += h;
            shoot(zp, fp);
            for (int i = 0; i < 4; ++i) {
                J[i][j] = (fp[i] - f[i]) / h;
                if (!std::isfinite(J[i][j])) bad = true;
            }
        }
        if (bad) break;
        // Solve J dz = f by Gaussian elimination with partial pivoting.
        std::array<double, 4> rhs = f;
        int piv[4] = {0, 1, 2, 3};
        for (int c = 0; c < 4; ++c) {
            int p = c;
            for (int r2 = c + 1; r2 < 4; ++r2)
                if (std::abs(J[piv[r2]][c]) > std::abs(J[piv[p]][c])) p = r2;
            std::swap(piv[c], piv[p]);
            const double d = J[piv[c]][c];
            if (d == 0.0 || !std::isfinite(d)) { bad = true; break; }
            for (int r2 = c + 1; r2 < 4; ++r2) {
                const double fac = J[piv[r2]][c] / d;
                for (int cc = c; cc < 4; ++cc) J[piv[r2]][cc] -= fac * J[piv[c]][cc];
                rhs[piv[r2]] -= fac * rhs[piv[c]];
            }
        }
        if (bad) break;
        std::array<double, 4> dz;
        for (int c = 3; c >= 0; --c) {
            double s = rhs[piv[c]];
            for (int cc = c + 1; cc < 4; ++cc) s -= J[piv[c]][cc] * dz[cc];
            dz[c] = s / J[piv[c]][c];
        }
        // Backtrack on overshoots that send a trial trajectory through
        // the center or fail to reduce a large residual.
        double lam = 1.0;
        const double f_prev = rnorm(f);
        for (int bt = 0; bt < 30; ++bt, lam *= 0.5) {
            auto zt = z;
            for (int j = 0; j < 4; ++j) zt[j] -= lam * dz[j];
            std::array<double, 4> ft;
            shoot(zt, ft);
            const double fn = rnorm(ft);
            if (std::isfinite(fn) && (fn < f_prev || f_prev < 1e-8)) break;
        }
        for (int j = 0; j < 4; ++j) z[j] -= lam * dz[j];
        y0s = shoot(z, f);
    }
    if (!(rnorm(f) <= 1e-9))
        throw std::runtime_error("shooting polish failed to close the boundary conditions");

    KeplerArc out;
    out.r0 = std::hypot(y0s[0], y0s[1]);
    out.endpoint_defect = rnorm(f);
    out.action_parabolic = parabolic_action(arc, T);

    // Sample the polished arc on the input grid, accumulating the
    // action on the way forward.
    out.times = grid;
    out.positions.resize(grid.size());
    KState y{y0s[0], y0s[1], y0s[2], y0s[3], 0.0};
    out.positions[0] = Complex(y[0], y[1]);
    for (int k = 1; k <= N; ++k) {
        y = kepler_integrate(y, grid[k - 1], grid[k], M, al);
        out.positions[k] = Complex(y[0], y[1]);
    }
    out.action = y[4];
    out.gap = out.action - out.action_parabolic;

    // Spot EOM residual by central differences around a few times.
    const double dt = 1e-4 * T;
    double worst = 0.0;
    for (int c = 1; c <= 8; ++c) {
        const double t = T * c / 9.0;
        KState ym = kepler_integrate(y, T, t - dt, M, al);
        KState yc = kepler_integrate(ym, t - dt, t, M, al);
        KState yp = kepler_integrate(yc, t, t + dt, M, al);
        const Complex gm(ym[0], ym[1]), gc(yc[0], yc[1]), gp(yp[0], yp[1]);
        const Complex acc = (gp - 2.0 * gc + gm) / (dt * dt);
        const double rr = std::abs(gc);
        const Complex force = -M * std::pow(rr, -al - 2.0) * gc;
        worst = std::max(worst, std::abs(acc - force) / std::max(1.0, std::abs(force)));
    }
    out.eom_residual = worst;
    return out;
}

double two_body_reduction_check(const BinaryCentralConfig& sbar, Alpha a, double T) {
    const double al = a.value;
    const double m2 = sbar.m2, m3 = sbar.m3, m0 = m2 + m3;
    const double kp = kappa(m2, m3, a);
    const double pw = 2.0 / (2.0 + al);
    const Complex s2 = sbar.sigma2(), s3 = sbar.sigma3();
    const double r23 = std::abs(s2 - s3);

    boost::math::quadrature::tanh_sinh<double> ts;
    // Pair action of the homothetic arc.
    const double lhs = ts.integrate(
        [&](double t) {
            const double gd = pw * kp * std::pow(kp * t, pw - 1.0);
            const double g = std::pow(kp * t, pw);
            const double kin =
                0.5 * m2 * std::norm(gd * s2) + 0.5 * m3 * std::norm(gd * s3);
            return kin + m2 * m3 / (al * std::pow(g * r23, al));
        },
        0.0, T);

    // One-center action of the m3 track with the reduced mass.
    const double M = m2 * std::pow(m2 / m0, 1.0 + al);
    const double rho3 = sbar.rho3();
    const double rhs = m0 * m3 / m2 *
                       ts.integrate(
                           [&](double t) {
                               const double gd = pw * kp * std::pow(kp * t, pw - 1.0);
                               const double g = std::pow(kp * t, pw);
                               return 0.5 * rho3 * rho3 * gd * gd +
                                      M / (al * std::pow(g * rho3, al));
                           },
                           0.0, T);
    return std::abs(lhs - rhs) / std::abs(lhs);
}

}  // namespace fig8
