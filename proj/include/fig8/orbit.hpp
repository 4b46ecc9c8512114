// Full-period orbit assembly from a quarter-period minimizer: the twist
// and conjugation extensions, a shooting polish that turns the discrete
// stationary path into a high-accuracy trajectory, and verification of
// the orbit's defining properties.
#pragma once

#include <vector>

#include "fig8/path.hpp"
#include "fig8/shape.hpp"

namespace fig8 {

struct FullOrbit {
    Masses m;
    double alpha = 1.0;
    double T0 = 1.0;                   // quarter period
    std::vector<double> times;         // closed loop samples on [0, 4*T0]
    std::vector<Config> configs;
    std::vector<Velocity> velocities;  // same size as configs
    double action_quarter = 0.0;

    double period() const { return 4.0 * T0; }
};

// x(T0 + t) = (-x2, -x1, -x3)(T0 - t).  Requires m1 = m2 and the quarter
// to end at the symmetric collinear form (-c e^{i theta}, c e^{i theta}, 0).
DiscretePath extend_twist(const DiscretePath& quarter, const Masses& m);

// x(2T0 + t) = conj(x)(2T0 - t).  Requires x(2T0) real (automatic when
// the quarter started on the real axis).  Returns the closed loop on
// [0, 4T0] with x(4T0) = x(0) exactly.
DiscretePath extend_reflect(const DiscretePath& half, const Masses& m);

// Quarter minimizer -> full orbit with finite-difference velocities.
FullOrbit from_quarter(const DiscretePath& quarter, const Masses& m, double alpha);

struct PolishOptions {
    double integ_tol = 1e-13;
    double residual_tol = 1e-10;  // times sqrt(I(0))
    int max_newton = 40;
    int samples_per_quarter = 1024;
};

struct PolishInfo {
    int newton_iters = 0;
    double residual = 0.0;        // boundary residual at T0, absolute
    double closure_defect = 0.0;  // |state(4T0) - state(0)| over full re-integration
};

// Shooting correction of the initial state (real positions, imaginary
// velocities) so that x3(T0) = 0 and v1(T0) = v2(T0), then dense
// re-integration of the quarter and exact symmetry extension.
FullOrbit polish(const FullOrbit& orbit, const PolishOptions& opt = {},
                 PolishInfo* info = nullptr);

struct VerificationReport {
    double tol_geom = 0.0;          // absolute, already scaled
    double tol_conservation = 0.0;  // relative
    double scale = 0.0;             // max sqrt(I) over samples

    bool a_ok = false, b_ok = false, c_ok = false, d_ok = false;
    double a_dev = 0.0;  // worst deviation from realness at t=0, 2T0
    double b_dev = 0.0;  // worst deviation from the symmetric form at T0, 3T0
    double d_dev = 0.0;  // worst deviation in the two symmetry identities

    std::vector<SyzygyEvent> syzygies;  // within one period [0, 4T0)
    std::vector<int> reduced_cyclic;

    double energy_drift = 0.0;       // relative
    double J_max = 0.0;              // absolute
    double J_scale = 0.0;            // sum m |x||v|, for normalizing J
    double eom_residual_max = 0.0;   // spot re-integration defect / scale
    double closure_defect = 0.0;     // full-period re-integration defect / scale
    double transversality_t0 = 0.0;  // max_j |Re v_j(0)|

    bool passed() const;
};

VerificationReport verify(const FullOrbit& orbit, double tol_geom_rel = 1e-6,
                          double tol_conservation = 1e-8);

// Adaptive 8th-order integration of the equations of motion, sampled at
// the given times (times[0] is the initial time of the state).
SampledTrajectory integrate_trajectory(const Config& x0, const Velocity& v0, const Masses& m,
                                       Alpha a, const std::vector<double>& times,
                                       std::vector<Velocity>* vels = nullptr,
                                       double tol = 1e-13);

}  // namespace fig8
