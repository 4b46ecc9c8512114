#include "fig8/shape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fig8 {

double ShapePoint::norm() const { return std::sqrt(w1 * w1 + w2 * w2 + w3 * w3); }

ShapePoint ShapePoint::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the triple-collision point");
    return {w1 / n, w2 / n, w3 / n};
}

std::string SyzygySequence::str() const {
    std::string s;
    for (int t : types) s += static_cast<char>('0' + t);
    return s;
}

ShapePoint project(const Config& cfg, const Masses& m) {
    const double m12 = m.m1 + m.m2;
    const Complex xi1 = cfg[1] - cfg[0];
    const Complex xi2 = cfg[2] - (m.m1 * cfg[0] + m.m2 * cfg[1]) / m12;
    const double mu1 = m.m1 * m.m2 / m12;
    const double mu2 = m.m3 * m12 / m.total();
    const Complex z1 = std::sqrt(mu1) * xi1;
    const Complex z2 = std::sqrt(mu2) * xi2;
    const Complex p = std::conj(z1) * z2;
    return {0.5 * (std::norm(z1) - std::norm(z2)), p.real(), p.imag()};
}

int syzygy_type(const Config& cfg, const Masses& m, double tol) {
    const double I = moment_of_inertia(centered(cfg, m), m);
    const ShapePoint w = project(centered(cfg, m), m);
    if (!(std::abs(w.w3) <= tol * std::max(I, 1e-300)))
        throw std::invalid_argument("configuration is not collinear within tolerance");

    // Principal direction from the longest side, positions projected onto it.
    Complex d = cfg[1] - cfg[0];
    if (std::abs(cfg[2] - cfg[0]) > std::abs(d)) d = cfg[2] - cfg[0];
    if (std::abs(cfg[2] - cfg[1]) > std::abs(d)) d = cfg[2] - cfg[1];
    const double scale = std::abs(d);
    if (scale == 0.0) throw std::invalid_argument("total collapse has no syzygy type");
    d /= scale;

    std::array<std::pair<double, int>, 3> s;
    for (int j = 0; j < 3; ++j)
        s[j] = {cfg[j].real() * d.real() + cfg[j].imag() * d.imag(), j};
    std::sort(s.begin(), s.end());
    const double eps = 1e-12 * scale;
    if (s[1].first - s[0].first < eps || s[2].first - s[1].first < eps)
        throw std::invalid_argument("syzygy type ambiguous at a binary collision");
    return s[1].second + 1;
}

namespace {

Config lerp(const Config& a, const Config& b, double s) {
    Config c;
    for (int j = 0; j < 3; ++j) c[j] = (1.0 - s) * a[j] + s * b[j];
    return c;
}

}  // namespace

std::vector<SyzygyEvent> extract_syzygies(const SampledTrajectory& traj, const Masses& m) {
    const size_t n = traj.times.size();
    if (n < 2 || traj.configs.size() != n)
        throw std::invalid_argument("trajectory needs at least two samples");
    const double span = traj.times.back() - traj.times.front();

    std::vector<double> w3(n), inertia(n);
    for (size_t i = 0; i < n; ++i) {
        w3[i] = project(traj.configs[i], m).w3;
        inertia[i] = moment_of_inertia(traj.configs[i], m);
    }

    std::vector<SyzygyEvent> events;
    auto push_event = [&](double t, const Config& at, double slope) {
        if (!events.empty() && t - events.back().time < 1e-9 * span) return;
        SyzygyEvent e;
        e.time = t;
        e.crossing_sign = slope > 0 ? 1 : (slope < 0 ? -1 : 0);
        e.tangential = std::abs(slope) * span < 1e-8 * std::max(moment_of_inertia(at, m), 1e-300);
        e.type = syzygy_type(at, m, 1e-5);
        events.push_back(e);
    };

    for (size_t i = 0; i < n; ++i) {
        const double ztol = 1e-12 * std::max(inertia[i], 1e-300);
        if (std::abs(w3[i]) <= ztol) {
            double slope = 0.0;
            if (i + 1 < n) slope = (w3[i + 1] - w3[i]) / (traj.times[i + 1] - traj.times[i]);
            else slope = (w3[i] - w3[i - 1]) / (traj.times[i] - traj.times[i - 1]);
            push_event(traj.times[i], traj.configs[i], slope);
            continue;
        }
        if (i + 1 >= n) break;
        const double ztol1 = 1e-12 * std::max(inertia[i + 1], 1e-300);
        if (std::abs(w3[i + 1]) <= ztol1) continue;  // handled at the next sample
        if (w3[i] * w3[i + 1] > 0.0) continue;

        // Bisection on the linear interpolant of the configurations.
        double lo = 0.0, hi = 1.0, flo = w3[i];
        const double dt = traj.times[i + 1] - traj.times[i];
        while ((hi - lo) * dt > 1e-10 * span) {
            const double mid = 0.5 * (lo + hi);
            const double f = project(lerp(traj.configs[i], traj.configs[i + 1], mid), m).w3;
            if (f == 0.0) { lo = hi = mid; break; }
            if (f * flo > 0.0) { lo = mid; flo = f; }
            else hi = mid;
        }
        const double s = 0.5 * (lo + hi);
        push_event(traj.times[i] + s * dt, lerp(traj.configs[i], traj.configs[i + 1], s),
                   (w3[i + 1] - w3[i]) / dt);
    }
    return events;
}

SyzygySequence reduce_sequence(SyzygySequence seq) {
    std::vector<int> out;
    auto reduce_linear = [](std::vector<int>& v) {
        std::vector<int> st;
        for (int t : v) {
            if (!st.empty() && st.back() == t) st.pop_back();
            else st.push_back(t);
        }
        v = std::move(st);
    };
    out = seq.types;
    reduce_linear(out);
    if (seq.cyclic) {
        while (out.size() >= 2 && out.front() == out.back()) {
            out.erase(out.begin());
            out.pop_back();
            reduce_linear(out);
        }
    }
    seq.types = std::move(out);
    return seq;
}

double euler_ratio(double ma, double mj, double mb) {
    // Collinear central-configuration quintic for ordering (a, j, b),
    // x = r_jb / r_aj.  Exactly one positive root.
    auto f = [&](double x) {
        return ((((ma + mj) * x + (3 * ma + 2 * mj)) * x + (3 * ma + mj)) * x * x * x)
               - ((mj + 3 * mb) * x * x + (2 * mj + 3 * mb) * x + (mj + mb));
    };
    double lo = 1e-9, hi = 1.0;
    while (f(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

ShapePoint unit_project(const Config& raw, const Masses& m) {
    return project(centered(raw, m), m).normalized();
}

}  // namespace

Landmarks landmarks(const Masses& m) {
    Landmarks lm;

    const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
    lm.Lplus = unit_project({Complex(1, 0), w, w * w}, m);
    lm.Lminus = unit_project({Complex(1, 0), std::conj(w), std::conj(w * w)}, m);

    lm.b12 = unit_project({Complex(0, 0), Complex(0, 0), Complex(1, 0)}, m);
    lm.b13 = unit_project({Complex(0, 0), Complex(1, 0), Complex(0, 0)}, m);
    lm.b23 = unit_project({Complex(1, 0), Complex(0, 0), Complex(0, 0)}, m);

    auto euler = [&](int a, int j, int b) {
        const double r = euler_ratio(m[a], m[j], m[b]);
        Config cfg;
        cfg[a] = Complex(0, 0);
        cfg[j] = Complex(1, 0);
        cfg[b] = Complex(1 + r, 0);
        return unit_project(cfg, m);
    };
    lm.E1 = euler(1, 0, 2);
    lm.E2 = euler(0, 1, 2);
    lm.E3 = euler(0, 2, 1);
    return lm;
}

}  // namespace fig8
