// Local deformation analysis near a binary collision: homothetic
// parabolic two-body arcs, the plateau/ramp deformation with its
// three-term action split, the lambda blow-up map, polar asymptotics of
// the colliding pair, and the one-center (Kepler-type) arc problem.
#pragma once

#include <utility>
#include <vector>

#include "fig8/orbit.hpp"
#include "fig8/path.hpp"

namespace fig8 {

// Constant kappa making (kappa t)^{2/(2+alpha)} * s a zero-energy
// homothetic solution of the two-body problem, s the normalized
// centered configuration of the pair.
double kappa(double m2, double m3, Alpha a);

// Normalized centered two-body configuration along the ray of angle
// phi3 (body 2 sits on the opposite ray).
struct BinaryCentralConfig {
    double m2 = 1.0, m3 = 1.0;
    double phi3 = 0.0;

    double rho2() const;  // sqrt(m3 / (m2 (m2 + m3)))
    double rho3() const;  // sqrt(m2 / (m3 (m2 + m3)))
    Complex sigma2() const;
    Complex sigma3() const;
};

// Two-body homothetic-parabolic positions (kappa t)^{2/(2+a)} sigma.
std::pair<Complex, Complex> homothetic_positions(const BinaryCentralConfig& s, Alpha a,
                                                 double t);
std::pair<Complex, Complex> homothetic_velocities(const BinaryCentralConfig& s, Alpha a,
                                                  double t);

// Zero-energy collision-ejection solution of the one-center problem
// with mass M at the origin: radius ((2+a)/sqrt(2a) sqrt(M) |t|)^{2/(2+a)},
// angle psi_minus for t <= 0 and psi_plus for t > 0.
struct ParabolicArc {
    double M = 1.0;
    double alpha = 1.0;
    double psi_plus = 0.0;
    double psi_minus = 0.0;
};
Complex parabolic_position(const ParabolicArc& arc, double t);
Complex parabolic_velocity(const ParabolicArc& arc, double t);  // t != 0
// Action of the arc over [0, T] in closed form (Lagrangian = 2V on a
// zero-energy solution).
double parabolic_action(const ParabolicArc& arc, double T);

struct DeformationReport {
    double epsilon = 0.0;
    double A1 = 0.0;  // potential difference over the plateau
    double A2 = 0.0;  // potential difference over the ramp
    double A3 = 0.0;  // kinetic difference over the ramp
    double total = 0.0;
    double a1_exponent = 0.0;  // log-log slope of |A1|, filled by sweeps
};

// Deform the homothetic-parabolic arc of sbar by eps * f(t) * sigma,
// f = 1 on [0, eps^{(2+a)/2}], linear down to 0 over a ramp of length
// eps, 0 afterwards.  Throws std::invalid_argument if the window
// exceeds T or the mass pairs disagree.
DeformationReport deform_split(const BinaryCentralConfig& sbar, const BinaryCentralConfig& sigma,
                               double eps, double T, Alpha a);

// Geometric eps ladder with 8 points per decade; fits the log-log slope
// of |A1| discarding the largest decade and stamps it on every entry.
std::vector<DeformationReport> deform_sweep(const BinaryCentralConfig& sbar,
                                            const BinaryCentralConfig& sigma, double eps_lo,
                                            double eps_hi, double T, Alpha a);

// x^lambda(t) = lambda^{-2/(2+alpha)} x(lambda t) on the mapped grid,
// so that A(x, [0,d]) = lambda^{(2-a)/(2+a)} A(x^lambda, [0, d/lambda]).
DiscretePath blow_up(const DiscretePath& path, double lambda, Alpha a);

// Polar data of the (2,3) pair about its own center of mass.
struct PairPolarSeries {
    std::vector<double> times;
    std::vector<double> JK;          // pair angular momentum
    std::vector<double> IK;          // pair inertia about its center
    std::vector<double> theta3;      // polar angle of body 3
    std::vector<double> theta3_dot;
};
PairPolarSeries pair_polar_series(const SampledTrajectory& traj,
                                  const std::vector<Velocity>& vels, const Masses& m);

struct PolarLimits {
    double theta3_plus = 0.0;       // angle at the smallest sampled time
    double decay_exponent = 0.0;    // log-log slope of |theta3_dot|
    bool theta_dot_vanishes = false;
};
// Requires a series heading into a binary collision (pair inertia at
// the smallest time below 1e-4 of the largest); throws otherwise.
// A series with theta3_dot identically ~0 reports an infinite exponent.
PolarLimits polar_limits(const PairPolarSeries& s);

struct KeplerArc {
    std::vector<double> times;
    std::vector<Complex> positions;
    double r0 = 0.0;           // initial radius on the psi ray
    double action = 0.0;       // polished action over [0, T]
    double action_parabolic = 0.0;
    double gap = 0.0;          // action - action_parabolic
    double eom_residual = 0.0;
    double endpoint_defect = 0.0;
};

// Minimize the one-center action over paths with gamma(T) fixed at the
// parabolic endpoint and gamma(0) on the ray of angle psi (radius
// free), then polish by shooting.  Throws std::invalid_argument when
// |psi - psi_plus| exceeds pi (reaches pi at alpha = 1).
KeplerArc kepler_deform(double M, Alpha a, double psi, double psi_plus, double T,
                        const std::vector<double>& grid);

// Residual of the identity between the pair action of the homothetic
// arc and (m0 m3 / m2) times the one-center action of its m3 track,
// both sides by independent quadrature.
double two_body_reduction_check(const BinaryCentralConfig& sbar, Alpha a, double T);

}  // namespace fig8
