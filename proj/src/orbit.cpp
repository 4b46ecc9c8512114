#include "fig8/orbit.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

namespace fig8 {

namespace {

// 12 phase-space coordinates plus the running action integral.
using State = std::array<double, 13>;

State pack_state(const Config& x, const Velocity& v) {
    State s{};
    for (int j = 0; j < 3; ++j) {
        s[2 * j] = x[j].real();
        s[2 * j + 1] = x[j].imag();
        s[6 + 2 * j] = v[j].real();
        s[6 + 2 * j + 1] = v[j].imag();
    }
    s[12] = 0.0;
    return s;
}

void unpack_state(const State& s, Config& x, Velocity& v) {
    for (int j = 0; j < 3; ++j) {
        x[j] = Complex(s[2 * j], s[2 * j + 1]);
        v[j] = Complex(s[6 + 2 * j], s[6 + 2 * j + 1]);
    }
}

struct Rhs {
    Masses m;
    double alpha;

    void operator()(const State& s, State& ds, double) const {
        Config x;
        Velocity v;
        unpack_state(s, x, v);
        const Velocity acc = accelerations(x, m, Alpha(alpha));
        for (int j = 0; j < 3; ++j) {
            ds[2 * j] = v[j].real();
            ds[2 * j + 1] = v[j].imag();
            ds[6 + 2 * j] = acc[j].real();
            ds[6 + 2 * j + 1] = acc[j].imag();
        }
        ds[12] = kinetic_energy(v, m) + potential_energy(x, m, Alpha(alpha));
    }
};

State integrate_to(State s, double t0, double t1, const Masses& m, double alpha, double tol) {
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_adaptive(stepper, Rhs{m, alpha}, s, t0, t1, (t1 - t0) / 256.0);
    return s;
}

Config twist_image(const Config& c) {
    return {-c[1], -c[0], -c[2]};
}

double config_scale(const Config& c, const Masses& m) {
    return std::sqrt(moment_of_inertia(c, m));
}

void solve4(double A[4][4], double b[4]) {
    int perm[4] = {0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(A[perm[r]][col]) > std::abs(A[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        const double d = A[perm[col]][col];
        if (std::abs(d) < 1e-300) throw std::runtime_error("singular shooting Jacobian");
        for (int r = col + 1; r < 4; ++r) {
            const double f = A[perm[r]][col] / d;
            for (int c = col; c < 4; ++c) A[perm[r]][c] -= f * A[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    double out[4];
    for (int row = 3; row >= 0; --row) {
        double s = b[perm[row]];
        for (int c = row + 1; c < 4; ++c) s -= A[perm[row]][c] * out[c];
        out[row] = s / A[perm[row]][row];
    }
    for (int i = 0; i < 4; ++i) b[i] = out[i];
}

}  // namespace

DiscretePath extend_twist(const DiscretePath& quarter, const Masses& m) {
    if (m.m1 != m.m2) throw std::invalid_argument("twist extension needs m1 = m2");
    const int N = quarter.segments();
    const Config& end = quarter.nodes[N];
    const double s = config_scale(end, m);
    if (std::abs(end[2]) > 1e-8 * s || std::abs(end[0] + end[1]) > 1e-8 * s)
        throw std::invalid_argument("quarter does not end at the symmetric collinear form");

    DiscretePath out = quarter;
    const double T0 = quarter.times.back();
    for (int k = N - 1; k >= 0; --k) {
        out.times.push_back(2.0 * T0 - quarter.times[k]);
        out.nodes.push_back(twist_image(quarter.nodes[k]));
    }
    return out;
}

DiscretePath extend_reflect(const DiscretePath& half, const Masses& m) {
    const int N = half.segments();
    const Config& end = half.nodes[N];
    const double s = config_scale(end, m);
    for (int j = 0; j < 3; ++j)
        if (std::abs(end[j].imag()) > 1e-8 * s)
            throw std::invalid_argument("half-period endpoint is not real collinear");

    DiscretePath out = half;
    const double T2 = half.times.back();
    for (int k = N - 1; k >= 0; --k) {
        out.times.push_back(2.0 * T2 - half.times[k]);
        Config c;
        for (int j = 0; j < 3; ++j) c[j] = std::conj(half.nodes[k][j]);
        out.nodes.push_back(c);
    }
    return out;
}

FullOrbit from_quarter(const DiscretePath& quarter, const Masses& m, double alpha) {
    const DiscretePath full = extend_reflect(extend_twist(quarter, m), m);
    FullOrbit o;
    o.m = m;
    o.alpha = alpha;
    o.T0 = quarter.times.back();
    o.times = full.times;
    o.configs = full.nodes;
    // Tolerate a pinned boundary collision (collinear collision orbits).
    o.action_quarter = action_nodes(quarter, m, Alpha(alpha), false, true).value;

    // Periodic central differences; the last sample repeats the first.
    const size_t S = full.nodes.size() - 1;
    o.velocities.resize(S + 1);
    for (size_t k = 0; k < S; ++k) {
        const size_t prev = (k + S - 1) % S;
        const size_t next = (k + 1) % S;
        double dt = full.times[next == 0 ? S : next] - full.times[prev];
        if (next == 0) dt = full.times[S] - full.times[prev];  // wraps over the seam
        else if (k == 0) dt = full.times[1] + (full.times[S] - full.times[S - 1]);
        Velocity v;
        for (int j = 0; j < 3; ++j)
            v[j] = (full.nodes[next][j] - full.nodes[prev][j]) / dt;
        o.velocities[k] = v;
    }
    o.velocities[S] = o.velocities[0];
    return o;
}

FullOrbit polish(const FullOrbit& orbit, const PolishOptions& opt, PolishInfo* info) {
    const Masses& m = orbit.m;
    if (m.m1 != m.m2) throw std::invalid_argument("polish needs m1 = m2");
    if (orbit.configs.empty() || orbit.velocities.empty())
        throw std::invalid_argument("orbit has no sampled trajectory");
    const double T0 = orbit.T0;
    const double scale = config_scale(orbit.configs[0], m);

    // Shooting unknowns: real positions of bodies 1,2 at t=0 (body 3 by
    // centering) and imaginary velocities of bodies 1,2 (body 3 by
    // momentum).  Residual at T0: x3 = 0 and v1 = v2.
    double z[4] = {orbit.configs[0][0].real(), orbit.configs[0][1].real(),
                   orbit.velocities[0][0].imag(), orbit.velocities[0][1].imag()};

    auto initial_state = [&](const double* zz) {
        const double x3 = -(m.m1 * zz[0] + m.m2 * zz[1]) / m.m3;
        const double b3 = -(m.m1 * zz[2] + m.m2 * zz[3]) / m.m3;
        const Config x = {Complex(zz[0], 0), Complex(zz[1], 0), Complex(x3, 0)};
        const Velocity v = {Complex(0, zz[2]), Complex(0, zz[3]), Complex(0, b3)};
        return pack_state(x, v);
    };
    auto residual = [&](const double* zz, double* r) {
        const State end = integrate_to(initial_state(zz), 0.0, T0, m, orbit.alpha, opt.integ_tol);
        Config x;
        Velocity v;
        unpack_state(end, x, v);
        r[0] = x[2].real();
        r[1] = x[2].imag();
        r[2] = (v[0] - v[1]).real();
        r[3] = (v[0] - v[1]).imag();
    };
    auto norm4 = [](const double* r) {
        return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]);
    };

    double r[4];
    residual(z, r);
    double rn = norm4(r);
    int iters = 0;
    const double target = opt.residual_tol * scale;
    while (rn > target && iters < opt.max_newton) {
        double J[4][4];
        for (int i = 0; i < 4; ++i) {
            const double h = 1e-7 * std::max(1.0, std::abs(z[i]));
            double zp[4] = {z[0], z[1], z[2], z[3]};
            double zm[4] = {z[0], z[1], z[2], z[3]};
            zp[i] += h;
            zm[i] -= h;
            double rp[4], rm[4];
            residual(zp, rp);
            residual(zm, rm);
            for (int k = 0; k < 4; ++k) J[k][i] = (rp[k] - rm[k]) / (2 * h);
        }
        double step[4] = {r[0], r[1], r[2], r[3]};
        solve4(J, step);

        double lam = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 10; ++bt, lam *= 0.5) {
            double zt[4];
            for (int i = 0; i < 4; ++i) zt[i] = z[i] - lam * step[i];
            double rt[4];
            try {
                residual(zt, rt);
            } catch (const CollisionError&) {
                continue;
            }
            if (norm4(rt) < rn) {
                for (int i = 0; i < 4; ++i) z[i] = zt[i];
                for (int i = 0; i < 4; ++i) r[i] = rt[i];
                rn = norm4(r);
                moved = true;
                break;
            }
        }
        ++iters;
        if (!moved) break;
    }
    if (rn > 100.0 * target)
        throw std::runtime_error("shooting correction failed to close the boundary conditions");

    // Dense quarter trajectory, then exact symmetry extension.
    const int n = opt.samples_per_quarter;
    std::vector<double> qt(n + 1);
    for (int k = 0; k <= n; ++k) qt[k] = T0 * k / n;
    std::vector<Config> qx(n + 1);
    std::vector<Velocity> qv(n + 1);
    double action_quarter = 0.0;
    {
        State s = initial_state(z);
        unpack_state(s, qx[0], qv[0]);
        for (int idx = 1; idx <= n; ++idx) {
            s = integrate_to(s, qt[idx - 1], qt[idx], m, orbit.alpha, opt.integ_tol);
            unpack_state(s, qx[idx], qv[idx]);
        }
        action_quarter = s[12];
    }

    FullOrbit out;
    out.m = m;
    out.alpha = orbit.alpha;
    out.T0 = T0;
    out.action_quarter = action_quarter;
    out.times.resize(4 * n + 1);
    out.configs.resize(4 * n + 1);
    out.velocities.resize(4 * n + 1);
    for (int k = 0; k <= n; ++k) {
        out.configs[k] = qx[k];
        out.velocities[k] = qv[k];
    }
    for (int k = 1; k <= n; ++k) {
        out.configs[n + k] = twist_image(qx[n - k]);
        out.velocities[n + k] = {qv[n - k][1], qv[n - k][0], qv[n - k][2]};
    }
    for (int k = 1; k <= 2 * n; ++k) {
        Config c;
        Velocity v;
        for (int j = 0; j < 3; ++j) {
            c[j] = std::conj(out.configs[2 * n - k][j]);
            v[j] = -std::conj(out.velocities[2 * n - k][j]);
        }
        out.configs[2 * n + k] = c;
        out.velocities[2 * n + k] = v;
    }
    for (int k = 0; k <= 4 * n; ++k) out.times[k] = 4.0 * T0 * k / (4 * n);

    if (info) {
        info->newton_iters = iters;
        info->residual = rn;
        const State s0 = initial_state(z);
        const State sT = integrate_to(s0, 0.0, 4.0 * T0, m, orbit.alpha, opt.integ_tol);
        double d = 0.0;
        for (int i = 0; i < 12; ++i) d += (sT[i] - s0[i]) * (sT[i] - s0[i]);
        info->closure_defect = std::sqrt(d);
    }
    return out;
}

bool VerificationReport::passed() const {
    return a_ok && b_ok && c_ok && d_ok && energy_drift <= tol_conservation &&
           J_max <= tol_conservation * J_scale &&
           reduced_cyclic == std::vector<int>{2, 3, 1, 3};
}

VerificationReport verify(const FullOrbit& orbit, double tol_geom_rel,
                          double tol_conservation) {
    const Masses& m = orbit.m;
    const Alpha a(orbit.alpha);
    const size_t S = orbit.configs.size() - 1;  // samples per period
    if (S < 8 || S % 4 != 0 || orbit.velocities.size() != S + 1)
        throw std::invalid_argument("orbit sampling is not a closed loop in quarters");
    const size_t n = S / 4;

    VerificationReport rep;
    rep.tol_conservation = tol_conservation;
    for (size_t k = 0; k <= S; ++k)
        rep.scale = std::max(rep.scale, config_scale(orbit.configs[k], m));
    rep.tol_geom = tol_geom_rel * rep.scale;

    // (a) real collinear with the required orderings at t=0 and 2T0.
    {
        const Config& c0 = orbit.configs[0];
        const Config& ch = orbit.configs[2 * n];
        for (int j = 0; j < 3; ++j)
            rep.a_dev = std::max({rep.a_dev, std::abs(c0[j].imag()), std::abs(ch[j].imag())});
        rep.a_ok = rep.a_dev <= rep.tol_geom &&
                   c0[0].real() < c0[1].real() && c0[1].real() < c0[2].real() &&
                   ch[2].real() < ch[0].real() && ch[0].real() < ch[1].real();
    }

    // (b) symmetric collinear form at T0 and 3T0.
    {
        for (const size_t k : {n, 3 * n}) {
            const Config& c = orbit.configs[k];
            rep.b_dev = std::max({rep.b_dev, std::abs(c[2]), std::abs(c[0] + c[1])});
        }
        rep.b_ok = rep.b_dev <= rep.tol_geom;
    }

    // (c) exactly four syzygies per period, at the quarter marks.
    {
        SampledTrajectory traj{orbit.times, orbit.configs};
        auto events = extract_syzygies(traj, m);
        // The loop closes at 4T0 where the t=0 syzygy repeats.
        while (!events.empty() && events.back().time > orbit.period() * (1.0 - 1e-9))
            events.pop_back();
        rep.syzygies = events;
        rep.c_ok = events.size() == 4;
        if (rep.c_ok) {
            std::vector<int> types;
            for (size_t i = 0; i < 4; ++i) {
                if (std::abs(events[i].time - static_cast<double>(i) * orbit.T0) >
                    1e-6 * orbit.period())
                    rep.c_ok = false;
                types.push_back(events[i].type);
            }
            rep.reduced_cyclic = reduce_sequence({types, true}).types;
        }
    }

    // (d) the two symmetry identities at every sample time.
    {
        for (size_t k = 0; k < S; ++k) {
            const size_t jt = (2 * n + S - k) % S;  // t -> 2T0 - t
            const size_t jc = (S - k) % S;          // t -> 4T0 - t
            const Config& c = orbit.configs[k];
            const Config tw = twist_image(orbit.configs[jt]);
            for (int j = 0; j < 3; ++j) {
                rep.d_dev = std::max(rep.d_dev, std::abs(c[j] - tw[j]));
                rep.d_dev = std::max(rep.d_dev,
                                     std::abs(c[j] - std::conj(orbit.configs[jc][j])));
            }
        }
        rep.d_ok = rep.d_dev <= rep.tol_geom;
    }

    // Conserved quantities over the samples.
    {
        const double E0 = energy(orbit.configs[0], orbit.velocities[0], m, a);
        for (size_t k = 0; k <= S; ++k) {
            const double E = energy(orbit.configs[k], orbit.velocities[k], m, a);
            rep.energy_drift = std::max(rep.energy_drift, std::abs(E - E0));
            rep.J_max = std::max(
                rep.J_max, std::abs(angular_momentum(orbit.configs[k], orbit.velocities[k], m)));
            double js = 0.0;
            for (int j = 0; j < 3; ++j)
                js += m[j] * std::abs(orbit.configs[k][j]) * std::abs(orbit.velocities[k][j]);
            rep.J_scale = std::max(rep.J_scale, js);
        }
        rep.energy_drift /= std::abs(E0);
    }

    // Spot re-integration: the samples should follow the equations of
    // motion from one sample to the next.
    {
        const size_t stride = std::max<size_t>(1, S / 16);
        for (size_t k = 0; k + 1 <= S; k += stride) {
            State s = pack_state(orbit.configs[k], orbit.velocities[k]);
            s = integrate_to(s, orbit.times[k], orbit.times[k + 1], m, orbit.alpha, 1e-13);
            Config x;
            Velocity v;
            unpack_state(s, x, v);
            for (int j = 0; j < 3; ++j) {
                rep.eom_residual_max =
                    std::max(rep.eom_residual_max, std::abs(x[j] - orbit.configs[k + 1][j]));
                rep.eom_residual_max =
                    std::max(rep.eom_residual_max, std::abs(v[j] - orbit.velocities[k + 1][j]));
            }
        }
        rep.eom_residual_max /= rep.scale;
    }

    // Full-period closure from the initial sample.
    {
        State s0 = pack_state(orbit.configs[0], orbit.velocities[0]);
        const State sT = integrate_to(s0, 0.0, orbit.period(), m, orbit.alpha, 1e-13);
        double d = 0.0;
        for (int i = 0; i < 12; ++i) d += (sT[i] - s0[i]) * (sT[i] - s0[i]);
        rep.closure_defect = std::sqrt(d) / rep.scale;
    }

    for (int j = 0; j < 3; ++j)
        rep.transversality_t0 =
            std::max(rep.transversality_t0, std::abs(orbit.velocities[0][j].real()));
    return rep;
}

SampledTrajectory integrate_trajectory(const Config& x0, const Velocity& v0, const Masses& m,
                                       Alpha a, const std::vector<double>& times,
                                       std::vector<Velocity>* vels, double tol) {
    if (times.size() < 2) throw std::invalid_argument("need at least two sample times");
    SampledTrajectory traj;
    traj.times = times;
    traj.configs.resize(times.size());
    if (vels) vels->resize(times.size());

    State s = pack_state(x0, v0);
    Config x;
    Velocity v;
    unpack_state(s, x, v);
    traj.configs[0] = x;
    if (vels) (*vels)[0] = v;
    for (size_t k = 1; k < times.size(); ++k) {
        s = integrate_to(s, times[k - 1], times[k], m, a.value, tol);
        unpack_state(s, x, v);
        traj.configs[k] = x;
        if (vels) (*vels)[k] = v;
    }
    return traj;
}

}  // namespace fig8
