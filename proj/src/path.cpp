#include "fig8/path.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fig8 {

namespace {

// 2-point Gauss nodes/weights on [0,1].
constexpr double kGaussXi[2] = {0.21132486540518711775, 0.78867513459481288225};
constexpr double kGaussW[2] = {0.5, 0.5};

constexpr double kSubdivideTrigger = 1e-3;  // times sqrt(I) at segment midpoint
constexpr int kSubdivide = 8;

Config lerp(const Config& a, const Config& b, double s) {
    Config c;
    for (int j = 0; j < 3; ++j) c[j] = (1.0 - s) * a[j] + s * b[j];
    return c;
}

}  // namespace

std::vector<double> uniform_grid(double T0, int n) {
    if (n < 1) throw std::invalid_argument("need at least one segment");
    std::vector<double> t(n + 1);
    for (int k = 0; k <= n; ++k) t[k] = T0 * k / n;
    return t;
}

std::vector<double> graded_grid(double T0, int n, double power) {
    if (n < 1) throw std::invalid_argument("need at least one segment");
    std::vector<double> t(n + 1);
    for (int k = 0; k <= n; ++k) t[k] = T0 * std::pow(static_cast<double>(k) / n, power);
    return t;
}

DiscretePath decode(const OmegaParams& p, const Masses& m, const std::vector<double>& grid) {
    const int N = p.segments();
    if (static_cast<int>(grid.size()) != N + 1)
        throw std::invalid_argument("grid size does not match parameter count");

    DiscretePath path;
    path.times = grid;
    path.nodes.resize(N + 1);

    const double g1 = std::exp(p.u), g2 = std::exp(p.v);
    path.nodes[0] = centered({Complex(0, 0), Complex(g1, 0), Complex(g1 + g2, 0)}, m);

    for (int k = 1; k < N; ++k) {
        const double* q = &p.interior[4 * (k - 1)];
        const Complex x1(q[0], q[1]), x2(q[2], q[3]);
        path.nodes[k] = {x1, x2, -(m.m1 * x1 + m.m2 * x2) / m.m3};
    }

    const Complex e = std::exp(p.logc) * std::polar(1.0, p.theta);
    path.nodes[N] = {-e, e, Complex(0, 0)};
    return path;
}

DiscretePath decode(const OmegaParams& p, const Masses& m, double T0) {
    return decode(p, m, uniform_grid(T0, p.segments()));
}

OmegaParams encode(const DiscretePath& path, const Masses&) {
    const int N = path.segments();
    OmegaParams p;
    const Config& a = path.nodes[0];
    const double gap1 = a[1].real() - a[0].real();
    const double gap2 = a[2].real() - a[1].real();
    if (!(gap1 > 0.0 && gap2 > 0.0))
        throw std::invalid_argument("start node is not an ordered real syzygy");
    p.u = std::log(gap1);
    p.v = std::log(gap2);

    const Config& b = path.nodes[N];
    p.logc = std::log(std::abs(b[1]));
    p.theta = std::arg(b[1]);

    p.interior.resize(4 * (N - 1));
    for (int k = 1; k < N; ++k) {
        double* q = &p.interior[4 * (k - 1)];
        q[0] = path.nodes[k][0].real();
        q[1] = path.nodes[k][0].imag();
        q[2] = path.nodes[k][1].real();
        q[3] = path.nodes[k][1].imag();
    }
    return p;
}

NodeActionResult action_nodes(const DiscretePath& path, const Masses& m, Alpha a,
                              bool want_grad, bool allow_node_collision) {
    const int N = path.segments();
    if (N < 1) throw std::invalid_argument("path has no segments");

    if (!allow_node_collision) {
        for (int k = 0; k <= N; ++k) {
            const double scale = std::sqrt(moment_of_inertia(path.nodes[k], m));
            if (min_pair_distance(path.nodes[k]) < 1e-14 * scale)
                throw CollisionError("collision at node " + std::to_string(k));
        }
    }

    NodeActionResult res;
    res.min_pair_distance = std::numeric_limits<double>::infinity();
    if (want_grad) res.node_grad.assign(N + 1, Config{});

    for (int k = 0; k < N; ++k) {
        const double h = path.times[k + 1] - path.times[k];
        if (!(h > 0.0)) throw std::invalid_argument("grid is not strictly increasing");
        const Config& L = path.nodes[k];
        const Config& R = path.nodes[k + 1];

        // Exact kinetic energy of the linear segment.
        for (int j = 0; j < 3; ++j) {
            const Complex d = R[j] - L[j];
            res.value += 0.5 * m[j] * std::norm(d) / h;
            if (want_grad) {
                res.node_grad[k][j] -= m[j] * d / h;
                res.node_grad[k + 1][j] += m[j] * d / h;
            }
        }

        // Potential quadrature, locally subdivided near close approaches.
        const double trigger =
            kSubdivideTrigger * std::sqrt(moment_of_inertia(lerp(L, R, 0.5), m));
        double base_min = std::numeric_limits<double>::infinity();
        for (double xi : kGaussXi)
            base_min = std::min(base_min, min_pair_distance(lerp(L, R, xi)));
        const int parts = base_min < trigger ? kSubdivide : 1;

        for (int p = 0; p < parts; ++p) {
            for (int g = 0; g < 2; ++g) {
                const double s = (p + kGaussXi[g]) / parts;
                const double w = kGaussW[g] * h / parts;
                const Config c = lerp(L, R, s);
                const double d = min_pair_distance(c);
                if (d < res.min_pair_distance) {
                    res.min_pair_distance = d;
                    res.min_pair_time = path.times[k] + s * h;
                }
                res.value += w * potential_energy(c, m, a);
                if (want_grad) {
                    const Velocity gU = potential_gradient(c, m, a);
                    for (int j = 0; j < 3; ++j) {
                        res.node_grad[k][j] += w * (1.0 - s) * gU[j];
                        res.node_grad[k + 1][j] += w * s * gU[j];
                    }
                }
            }
        }
    }
    return res;
}

double action(const DiscretePath& path, const Masses& m, Alpha a) {
    return action_nodes(path, m, a, false).value;
}

ActionEvaluation action_gradient(const OmegaParams& p, const Masses& m, Alpha a,
                                 const std::vector<double>& grid) {
    const int N = p.segments();
    const DiscretePath path = decode(p, m, grid);
    NodeActionResult nr = action_nodes(path, m, a, true);

    ActionEvaluation ev;
    ev.value = nr.value;
    ev.min_pair_distance = nr.min_pair_distance;
    ev.min_pair_time = nr.min_pair_time;
    ev.gradient.assign(4 + 4 * (N - 1), 0.0);

    auto dot = [](Complex grad, Complex dir) {
        return grad.real() * dir.real() + grad.imag() * dir.imag();
    };

    // t = 0 boundary: x(0) = center(0, e^u, e^u + e^v).
    {
        const double g1 = std::exp(p.u), g2 = std::exp(p.v);
        const Config du_raw = {Complex(0, 0), Complex(g1, 0), Complex(g1, 0)};
        const Config dv_raw = {Complex(0, 0), Complex(0, 0), Complex(g2, 0)};
        const Config du = centered(du_raw, m);  // centering is linear
        const Config dv = centered(dv_raw, m);
        for (int j = 0; j < 3; ++j) {
            ev.gradient[0] += dot(nr.node_grad[0][j], du[j]);
            ev.gradient[1] += dot(nr.node_grad[0][j], dv[j]);
        }
    }

    // t = T0 boundary: x(T0) = (-c e^{i theta}, c e^{i theta}, 0).
    {
        const Config& b = path.nodes[N];
        for (int j = 0; j < 3; ++j) {
            ev.gradient[2] += dot(nr.node_grad[N][j], b[j]);
            ev.gradient[3] += dot(nr.node_grad[N][j], Complex(0, 1) * b[j]);
        }
    }

    // Interior nodes: x3 = -(m1 x1 + m2 x2)/m3.
    const double r1 = m.m1 / m.m3, r2 = m.m2 / m.m3;
    for (int k = 1; k < N; ++k) {
        const Config& g = nr.node_grad[k];
        double* out = &ev.gradient[4 + 4 * (k - 1)];
        out[0] = g[0].real() - r1 * g[2].real();
        out[1] = g[0].imag() - r1 * g[2].imag();
        out[2] = g[1].real() - r2 * g[2].real();
        out[3] = g[1].imag() - r2 * g[2].imag();
    }
    return ev;
}

DiscretePath refine(const DiscretePath& path, int factor) {
    if (factor < 2) throw std::invalid_argument("refine factor must be >= 2");
    DiscretePath out;
    const int N = path.segments();
    out.times.reserve(N * factor + 1);
    out.nodes.reserve(N * factor + 1);
    for (int k = 0; k < N; ++k) {
        for (int p = 0; p < factor; ++p) {
            const double s = static_cast<double>(p) / factor;
            out.times.push_back((1.0 - s) * path.times[k] + s * path.times[k + 1]);
            out.nodes.push_back(lerp(path.nodes[k], path.nodes[k + 1], s));
        }
    }
    out.times.push_back(path.times.back());
    out.nodes.push_back(path.nodes.back());
    return out;
}

std::pair<double, double> min_pair_distance(const DiscretePath& path) {
    // Scans nodes plus the densest quadrature layout (8x2 Gauss points
    // per segment); never throws, even on collision paths.
    double best = std::numeric_limits<double>::infinity();
    double at = 0.0;
    auto consider = [&](const Config& c, double t) {
        const double d = min_pair_distance(c);
        if (d < best) {
            best = d;
            at = t;
        }
    };
    const int N = path.segments();
    consider(path.nodes[0], path.times[0]);
    for (int k = 0; k < N; ++k) {
        const double h = path.times[k + 1] - path.times[k];
        for (int p = 0; p < kSubdivide; ++p)
            for (double xi : kGaussXi) {
                const double s = (p + xi) / kSubdivide;
                consider(lerp(path.nodes[k], path.nodes[k + 1], s), path.times[k] + s * h);
            }
        consider(path.nodes[k + 1], path.times[k + 1]);
    }
    return {best, at};
}

std::vector<double> pack(const OmegaParams& p) {
    std::vector<double> x;
    x.reserve(4 + p.interior.size());
    x.push_back(p.u);
    x.push_back(p.v);
    x.push_back(p.logc);
    x.push_back(p.theta);
    x.insert(x.end(), p.interior.begin(), p.interior.end());
    return x;
}

OmegaParams unpack(const std::vector<double>& x) {
    if (x.size() < 4 || (x.size() - 4) % 4 != 0)
        throw std::invalid_argument("parameter vector has wrong length");
    OmegaParams p;
    p.u = x[0];
    p.v = x[1];
    p.logc = x[2];
    p.theta = x[3];
    p.interior.assign(x.begin() + 4, x.end());
    return p;
}

}  // namespace fig8
