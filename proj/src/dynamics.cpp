#include "fig8/dynamics.hpp"

#include <cmath>

namespace fig8 {

double moment_of_inertia(const Config& x, const Masses& m) {
    double I = 0.0;
    for (int j = 0; j < 3; ++j) I += m[j] * std::norm(x[j]);
    return I;
}

double min_pair_distance(const Config& x) {
    double d = std::abs(x[0] - x[1]);
    d = std::min(d, std::abs(x[0] - x[2]));
    d = std::min(d, std::abs(x[1] - x[2]));
    return d;
}

namespace {

void check_collision(const Config& x, const Masses& m) {
    const double scale = std::sqrt(moment_of_inertia(x, m));
    if (min_pair_distance(x) < 1e-14 * scale)
        throw CollisionError("configuration has a (near-exact) binary collision");
}

}  // namespace

double potential_energy(const Config& x, const Masses& m, Alpha a) {
    check_collision(x, m);
    double U = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k)
            U += m[j] * m[k] / (a.value * std::pow(std::abs(x[j] - x[k]), a.value));
    return U;
}

double kinetic_energy(const Velocity& v, const Masses& m) {
    double K = 0.0;
    for (int j = 0; j < 3; ++j) K += 0.5 * m[j] * std::norm(v[j]);
    return K;
}

Velocity potential_gradient(const Config& x, const Masses& m, Alpha a) {
    check_collision(x, m);
    Velocity g{};
    for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k) {
            const Complex d = x[j] - x[k];
            const double r = std::abs(d);
            // dU/dx_j = m_j m_k (x_k - x_j) / r^(alpha+2)
            const Complex f = m[j] * m[k] * d / std::pow(r, a.value + 2.0);
            g[j] -= f;
            g[k] += f;
        }
    return g;
}

Velocity accelerations(const Config& x, const Masses& m, Alpha a) {
    Velocity g = potential_gradient(x, m, a);
    for (int j = 0; j < 3; ++j) g[j] /= m[j];
    return g;
}

double angular_momentum(const Config& x, const Velocity& v, const Masses& m) {
    double J = 0.0;
    for (int j = 0; j < 3; ++j) J += m[j] * wedge(x[j], v[j]);
    return J;
}

double energy(const Config& x, const Velocity& v, const Masses& m, Alpha a) {
    return kinetic_energy(v, m) - potential_energy(x, m, a);
}

Config centered(const Config& x, const Masses& m) {
    Complex c{0.0, 0.0};
    for (int j = 0; j < 3; ++j) c += m[j] * x[j];
    c /= m.total();
    return {x[0] - c, x[1] - c, x[2] - c};
}

}  // namespace fig8
