// Planar three-body dynamics with an alpha-homogeneous pair potential.
// Positions live in the complex plane; all functions here are pure.
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace fig8 {

using Complex = std::complex<double>;

// Positions (or velocities / accelerations) of the three bodies.
using Config = std::array<Complex, 3>;
using Velocity = std::array<Complex, 3>;

struct Masses {
    double m1 = 1.0, m2 = 1.0, m3 = 1.0;

    double operator[](int j) const {
        return j == 0 ? m1 : (j == 1 ? m2 : m3);
    }
    double total() const { return m1 + m2 + m3; }
    void validate() const {
        if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0))
            throw std::invalid_argument("masses must be strictly positive");
    }
};

// Homogeneity exponent of the pair potential 1/r^alpha, 1 <= alpha < 2.
struct Alpha {
    double value = 1.0;

    explicit Alpha(double v) : value(v) {
        if (!(v >= 1.0 && v < 2.0))
            throw std::invalid_argument("alpha must be in [1,2)");
    }
};

struct CollisionError : std::runtime_error {
    explicit CollisionError(const std::string& what) : std::runtime_error(what) {}
};

// u ^ v = u_re*v_im - u_im*v_re (scalar cross product in the plane).
inline double wedge(Complex u, Complex v) {
    return u.real() * v.imag() - u.imag() * v.real();
}

double moment_of_inertia(const Config& x, const Masses& m);

// Sum over pairs of m_j m_k / (alpha |x_j - x_k|^alpha).
// Throws CollisionError when a pair distance is below 1e-14 * sqrt(I).
double potential_energy(const Config& x, const Masses& m, Alpha a);

double kinetic_energy(const Velocity& v, const Masses& m);

// grad_j U / m_j per body.  Newton's third law: sum m_j a_j = 0.
Velocity accelerations(const Config& x, const Masses& m, Alpha a);

// Force gradient dU/dx_j (not divided by mass).
Velocity potential_gradient(const Config& x, const Masses& m, Alpha a);

double angular_momentum(const Config& x, const Velocity& v, const Masses& m);

// K - U, conserved along solutions (including through isolated collisions).
double energy(const Config& x, const Velocity& v, const Masses& m, Alpha a);

// Translate so that sum m_j x_j = 0.
Config centered(const Config& x, const Masses& m);

// Smallest pairwise distance.
double min_pair_distance(const Config& x);

}  // namespace fig8
